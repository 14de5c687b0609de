use super::conic::Conic;
use super::curve::Curve;
use super::point::{ProjLine, ProjPoint};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat3};
use crate::rational::{int, Rational};

/// An invertible projective transformation, kept together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transform {
    m: Mat3,
    inv: Mat3,
}

impl Transform {
    pub fn new(m: Mat3) -> Result<Self> {
        let inv = linalg::inverse3(&m).ok_or(Error::SingularMatrix)?;
        Ok(Transform { m, inv })
    }

    pub fn from_ints(m: [[i64; 3]; 3]) -> Result<Self> {
        Self::new(m.map(|r| r.map(int)))
    }

    pub fn identity() -> Self {
        Self::from_ints([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).expect("identity is invertible")
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    pub fn inverse(&self) -> Transform {
        Transform {
            m: self.inv.clone(),
            inv: self.m.clone(),
        }
    }
}

/// Objects that move under a projective transformation.
pub trait Transformable: Sized {
    fn transformed(&self, t: &Transform) -> Self;
}

impl Transformable for ProjPoint {
    fn transformed(&self, t: &Transform) -> Self {
        ProjPoint::from_coords(linalg::mat_vec(&t.m, self.coords()))
            .expect("invertible map keeps points nonzero")
    }
}

impl Transformable for ProjLine {
    // l' = M⁻ᵀ l so that l'·(M p) = l·p
    fn transformed(&self, t: &Transform) -> Self {
        let inv_t = linalg::transpose(&t.inv);
        ProjLine::from_coeffs(linalg::mat_vec(&inv_t, self.coeffs()))
            .expect("invertible map keeps lines nonzero")
    }
}

impl Transformable for Conic {
    // A' = M⁻ᵀ A M⁻¹
    fn transformed(&self, t: &Transform) -> Self {
        let inv_t = linalg::transpose(&t.inv);
        let a = linalg::mat_mul(&linalg::mat_mul(&inv_t, &self.matrix()), &t.inv);
        Conic::from_matrix(&a).expect("congruence keeps forms nonzero")
    }
}

impl Transformable for Curve {
    fn transformed(&self, t: &Transform) -> Self {
        match self {
            Curve::Line(l) => Curve::Line(l.transformed(t)),
            Curve::Conic(c) => Curve::Conic(c.transformed(t)),
        }
    }
}

impl<T: Transformable> Transformable for Vec<T> {
    fn transformed(&self, t: &Transform) -> Self {
        self.iter().map(|x| x.transformed(t)).collect()
    }
}

pub fn apply_transform<T: Transformable>(t: &Transform, obj: &T) -> T {
    obj.transformed(t)
}

/// The unique transformation sending the standard frame
/// `(1:0:0), (0:1:0), (0:0:1), (1:1:1)` to four points in general position.
pub fn frame_transform(frame: [&ProjPoint; 4]) -> Result<Transform> {
    let cols: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| frame[j].coords()[i].clone()));
    let inv = linalg::inverse3(&cols).ok_or(Error::SingularMatrix)?;
    let lambda = linalg::mat_vec(&inv, frame[3].coords());
    if lambda.iter().any(|v: &Rational| num_traits::Zero::is_zero(v)) {
        return Err(Error::SingularMatrix);
    }
    let m: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| &cols[i][j] * &lambda[j]));
    Transform::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeom::{line_through, multiplicity};

    fn sample() -> Transform {
        Transform::from_ints([[2, 1, 0], [0, 1, 3], [1, 0, 1]]).unwrap()
    }

    #[test]
    fn identity_fixes_objects() {
        let id = Transform::identity();
        let p = ProjPoint::ints(1, 2, 3);
        assert_eq!(apply_transform(&id, &p), p);
        let c = Conic::ints([1, 2, 3, 4, 5, 6]);
        assert_eq!(apply_transform(&id, &c), c);
    }

    #[test]
    fn permutation_permutes_coordinates() {
        let perm = Transform::from_ints([[0, 0, 1], [1, 0, 0], [0, 1, 0]]).unwrap();
        assert_eq!(
            apply_transform(&perm, &ProjPoint::ints(1, 2, 3)),
            ProjPoint::ints(3, 1, 2)
        );
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(
            Transform::from_ints([[1, 2, 3], [2, 4, 6], [0, 0, 1]]),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn incidence_and_multiplicity_preserved() {
        let t = sample();
        let p = ProjPoint::ints(0, 0, 1);
        let pair = Conic::ints([0, 1, 0, 0, 0, 0]);
        assert_eq!(pair.multiplicity(&p), 2);
        assert_eq!(pair.transformed(&t).multiplicity(&p.transformed(&t)), 2);
        let q = ProjPoint::ints(2, 5, -1);
        let l = line_through(&p, &q).unwrap();
        let c = Curve::Line(l);
        assert_eq!(
            multiplicity(&q.transformed(&t), &c.transformed(&t)),
            multiplicity(&q, &c)
        );
    }

    #[test]
    fn frame_maps_standard_points() {
        let pts = [
            ProjPoint::ints(1, 2, 1),
            ProjPoint::ints(3, -1, 1),
            ProjPoint::ints(0, 1, 2),
            ProjPoint::ints(1, 1, 5),
        ];
        let t = frame_transform([&pts[0], &pts[1], &pts[2], &pts[3]]).unwrap();
        let std = [
            ProjPoint::ints(1, 0, 0),
            ProjPoint::ints(0, 1, 0),
            ProjPoint::ints(0, 0, 1),
            ProjPoint::ints(1, 1, 1),
        ];
        for (s, p) in std.iter().zip(&pts) {
            assert_eq!(&s.transformed(&t), p);
        }
    }
}
