//! Small dense helpers on `&[f64]` for points of arbitrary ambient dimension.

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn normalized(a: &[f64]) -> Vec<f64> {
    let n = norm(a);
    a.iter().map(|x| x / n).collect()
}

/// Area of the spherical triangle spanned by three unit vectors, in any
/// ambient dimension (the three points span at most a 3-space).
pub fn spherical_triangle_area(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let ab = dot(a, b);
    let bc = dot(b, c);
    let ca = dot(c, a);
    // Gram determinant = squared triple product.
    let gram = 1.0 + 2.0 * ab * bc * ca - ab * ab - bc * bc - ca * ca;
    let triple = gram.max(0.0).sqrt();
    2.0 * triple.atan2(1.0 + ab + bc + ca)
}

/// Euclidean area of a triangle from its three side lengths (Kahan's form).
pub fn heron(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let [a, b, c] = s;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    0.25 * p.max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn octant_triangle_has_area_half_pi() {
        let a = [1.0, 0.0, 0.0];
        let b = [0.0, 1.0, 0.0];
        let c = [0.0, 0.0, 1.0];
        assert!((spherical_triangle_area(&a, &b, &c) - PI / 2.0).abs() < 1e-14);
        // Embedded in R^5 it is the same triangle.
        let a5 = [0.0, 1.0, 0.0, 0.0, 0.0];
        let b5 = [0.0, 0.0, 0.0, 1.0, 0.0];
        let c5 = [0.0, 0.0, 0.0, 0.0, 1.0];
        assert!((spherical_triangle_area(&a5, &b5, &c5) - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn heron_right_triangle() {
        assert!((heron(3.0, 4.0, 5.0) - 6.0).abs() < 1e-14);
        assert_eq!(heron(1.0, 2.0, 3.0), 0.0);
    }
}
