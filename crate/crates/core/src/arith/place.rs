//! Geometric points of the projective line over the working field.
//!
//! A finite point is recorded as its monic irreducible minimal polynomial
//! over the working field together with an explicit root in the canonical
//! extension of matching degree. Keeping the root explicit makes the
//! arithmetic Frobenius act honestly: it moves both the polynomial
//! (coefficient-wise) and the root, so conjugate points over the working
//! field are distinct objects with computable orbits.

use super::ext::extension;
use super::field::{frobenius_exponent as frob_exp, Fq, FqElem};
use super::poly::{pcoeff_pow, peval, Poly};

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Place {
    Infinity,
    Finite { min_poly: Poly, root: FqElem },
}

impl Place {
    /// Residue degree over the working field; infinity is rational.
    pub fn degree(&self) -> usize {
        match self {
            Place::Infinity => 1,
            Place::Finite { min_poly, .. } => min_poly.deg().unwrap(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// The rational point a, as the root of x - a.
    pub fn from_element(fq: &Fq, a: &FqElem) -> Place {
        let min_poly = super::poly::normalize(fq, vec![fq.neg(a), fq.one()]);
        let ext = extension(fq, 1);
        Place::Finite {
            root: ext.embed(a),
            min_poly,
        }
    }

    /// All points above the monic irreducible f, sorted by root encoding.
    pub fn roots_of(fq: &Fq, f: &Poly) -> Vec<Place> {
        let d = f.deg().expect("nonconstant polynomial");
        assert!(f.is_monic(fq));
        let ext = extension(fq, d);
        super::factor::roots_in_field(&ext.ext, &ext.embed_poly(f))
            .into_iter()
            .map(|root| Place::Finite {
                min_poly: f.clone(),
                root,
            })
            .collect()
    }

    /// The i-th point above f in root-encoding order.
    pub fn from_poly_index(fq: &Fq, f: &Poly, index: usize) -> Option<Place> {
        Place::roots_of(fq, f).into_iter().nth(index)
    }

    /// Position of this point among the roots of its minimal polynomial.
    pub fn root_index(&self, fq: &Fq) -> Option<usize> {
        match self {
            Place::Infinity => None,
            Place::Finite { min_poly, root } => Place::roots_of(fq, min_poly)
                .iter()
                .position(|p| matches!(p, Place::Finite { root: r, .. } if r == root)),
        }
    }

    /// Whether the recorded root actually satisfies the recorded polynomial.
    pub fn is_consistent(&self, fq: &Fq) -> bool {
        match self {
            Place::Infinity => true,
            Place::Finite { min_poly, root } => {
                let d = match min_poly.deg() {
                    Some(d) if d >= 1 => d,
                    _ => return false,
                };
                if !min_poly.is_monic(fq) || !super::poly::is_irreducible(fq, min_poly) {
                    return false;
                }
                let ext = extension(fq, d);
                ext.ext.is_zero(&peval(&ext.ext, &ext.embed_poly(min_poly), root))
            }
        }
    }

    /// Image under the arithmetic Frobenius power x -> x^(q^e).
    pub fn apply_power(&self, fq: &Fq, q: u64, e: u64) -> Place {
        match self {
            Place::Infinity => Place::Infinity,
            Place::Finite { min_poly, root } => {
                let d = min_poly.deg().unwrap();
                let ext = extension(fq, d);
                let min_poly = pcoeff_pow(fq, min_poly, frob_exp(fq.order(), q, e));
                let root = ext.ext.pow(root, frob_exp(ext.ext.order(), q, e));
                Place::Finite { min_poly, root }
            }
        }
    }

    /// Canonical sort key: infinity first, then by degree, polynomial, root.
    pub fn sort_key(&self, fq: &Fq) -> (u8, usize, Vec<u128>, u128) {
        match self {
            Place::Infinity => (0, 0, Vec::new(), 0),
            Place::Finite { min_poly, root } => (
                1,
                min_poly.deg().unwrap(),
                min_poly.encode(fq),
                root.encode(fq.p()),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::poly::normalize;

    #[test]
    fn conjugate_points_over_prime_field() {
        let f3 = Fq::prime(3).unwrap();
        // t^2 + 1 is irreducible over F_3; its two roots are swapped by Frobenius
        let f = normalize(&f3, vec![f3.one(), f3.zero(), f3.one()]);
        let pts = Place::roots_of(&f3, &f);
        assert_eq!(pts.len(), 2);
        assert_ne!(pts[0], pts[1]);
        assert!(pts.iter().all(|p| p.is_consistent(&f3)));
        assert_eq!(pts[0].apply_power(&f3, 3, 1), pts[1]);
        assert_eq!(pts[1].apply_power(&f3, 3, 1), pts[0]);
        assert_eq!(pts[0].apply_power(&f3, 3, 2), pts[0]);
    }

    #[test]
    fn rational_points_are_fixed_or_moved_as_elements() {
        let f5 = Fq::prime(5).unwrap();
        let p = Place::from_element(&f5, &f5.from_u64(2));
        assert!(p.is_rational());
        assert!(p.is_consistent(&f5));
        assert_eq!(p.apply_power(&f5, 5, 1), p);
        assert_eq!(Place::Infinity.apply_power(&f5, 5, 3), Place::Infinity);

        // over F_9 the point j with j^2 = -1 moves under Frob_3
        let f9 = Fq::make(3, 2).unwrap();
        let j = f9
            .elements()
            .find(|a| f9.is_zero(&f9.add(&f9.mul(a, a), &f9.one())))
            .unwrap();
        let pj = Place::from_element(&f9, &j);
        let moved = pj.apply_power(&f9, 3, 1);
        assert_ne!(moved, pj);
        assert!(moved.is_consistent(&f9));
        assert_eq!(moved, Place::from_element(&f9, &f9.pow(&j, 3)));
        assert_eq!(pj.apply_power(&f9, 3, 2), pj);
    }

    #[test]
    fn cubic_place_orbit_is_cyclic_of_length_three() {
        let f2 = Fq::prime(2).unwrap();
        let f = normalize(&f2, vec![f2.one(), f2.one(), f2.zero(), f2.one()]);
        let pts = Place::roots_of(&f2, &f);
        assert_eq!(pts.len(), 3);
        let mut seen = vec![pts[0].clone()];
        let mut cur = pts[0].clone();
        for _ in 0..2 {
            cur = cur.apply_power(&f2, 2, 1);
            assert!(!seen.contains(&cur));
            seen.push(cur.clone());
        }
        assert_eq!(cur.apply_power(&f2, 2, 1), pts[0]);
    }

    #[test]
    fn root_index_roundtrip() {
        let f3 = Fq::prime(3).unwrap();
        let f = normalize(&f3, vec![f3.one(), f3.zero(), f3.one()]);
        for i in 0..2 {
            let p = Place::from_poly_index(&f3, &f, i).unwrap();
            assert_eq!(p.root_index(&f3), Some(i));
        }
        assert!(Place::from_poly_index(&f3, &f, 2).is_none());
    }
}
