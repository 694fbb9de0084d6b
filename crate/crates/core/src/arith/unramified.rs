//! Deciding whether the splitting field of a small-degree polynomial is unramified at p.
//!
//! Roots are examined cluster by cluster over the unramified ring ℤ[ζ]/(M), where M lifts the
//! modulus of 𝔽_{p^12}; every residue field of a splitting field of degree ≤ 4 embeds there.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::finite_field::{field, FPoly, FieldCtx};
use super::rat::{valuation, vp_int};
use crate::error::{PicardError, Result};
use crate::poly::QPoly;

const RESIDUE_DEGREE: usize = 12;

/// Arithmetic in ℤ[ζ]/(M) with M monic of degree `RESIDUE_DEGREE`.
struct UnramRing {
    p: u64,
    pb: BigInt,
    modulus: Vec<BigInt>,
    fq: std::sync::Arc<FieldCtx>,
}

type Elem = Vec<BigInt>;

impl UnramRing {
    fn new(p: u64) -> Self {
        let fq = field(p, RESIDUE_DEGREE);
        UnramRing {
            p,
            pb: BigInt::from(p),
            modulus: fq.modulus.iter().map(|&c| BigInt::from(c)).collect(),
            fq,
        }
    }

    fn k(&self) -> usize {
        RESIDUE_DEGREE
    }

    fn from_int(&self, n: BigInt) -> Elem {
        let mut e = vec![BigInt::zero(); self.k()];
        e[0] = n;
        e
    }

    fn is_zero(&self, a: &Elem) -> bool {
        a.iter().all(Zero::is_zero)
    }

    fn add(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let k = self.k();
        let mut prod = vec![BigInt::zero(); 2 * k - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        for d in (k..prod.len()).rev() {
            let c = std::mem::take(&mut prod[d]);
            if c.is_zero() {
                continue;
            }
            for i in 0..k {
                let t = &c * &self.modulus[i];
                prod[d - k + i] -= t;
            }
        }
        prod.truncate(k);
        prod
    }

    /// Valuation of an element (None for zero): the ring is unramified, so it is the
    /// minimum over coordinates.
    fn val(&self, a: &Elem) -> Option<i64> {
        a.iter()
            .filter(|c| !c.is_zero())
            .map(|c| vp_int(c, self.p))
            .min()
    }

    fn div_p_pow(&self, a: &Elem, v: i64) -> Elem {
        let d = self.pb.pow(v as u32);
        a.iter().map(|c| c / &d).collect()
    }

    fn reduce(&self, a: &Elem) -> Vec<u64> {
        self.fq.from_coords(a)
    }

    fn lift(&self, r: &[u64]) -> Elem {
        r.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn scale_p_pow(&self, a: &Elem, s: i64) -> Elem {
        let d = self.pb.pow(s as u32);
        a.iter().map(|c| c * &d).collect()
    }

    /// `h(x + a)` by Horner's rule.
    fn shift(&self, h: &[Elem], a: &Elem) -> Vec<Elem> {
        let zero = self.from_int(BigInt::zero());
        let mut out: Vec<Elem> = Vec::new();
        for c in h.iter().rev() {
            // out = out * (x + a) + c
            let mut next = vec![zero.clone(); out.len() + 1];
            for (i, o) in out.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], o);
                next[i] = self.add(&next[i], &self.mul(o, a));
            }
            next[0] = self.add(&next[0], c);
            out = next;
        }
        out
    }

    /// Roots with multiplicity of a residual polynomial; `None` if some root lies
    /// outside the residue field (so the extension is ramified).
    fn residual_roots(&self, coeffs: &[Vec<u64>]) -> Option<Vec<(Vec<u64>, usize)>> {
        let f: FPoly = self.fq.trim(coeffs.to_vec());
        let deg = f.len() - 1;
        let roots = self.fq.roots_with_multiplicity(&f);
        let total: usize = roots.iter().map(|(_, m)| m).sum();
        (total == deg).then_some(roots)
    }

    /// Examines the `m` roots of the monic `h` that have positive valuation.
    fn cluster(&self, mut h: Vec<Elem>, mut m: usize, depth: usize, max_depth: usize) -> Result<bool> {
        if depth > max_depth {
            return Err(PicardError::Computation(
                "ramification recursion exceeded its depth bound".into(),
            ));
        }
        // An exact root at the current centre lies in the ring itself.
        while m > 0 && self.is_zero(&h[0]) {
            h.remove(0);
            m -= 1;
        }
        if m <= 1 {
            return Ok(true);
        }
        let vals: Vec<Option<i64>> = h.iter().take(m + 1).map(|c| self.val(c)).collect();
        // Lower convex hull of (i, v_i) for 0 ≤ i ≤ m.
        let pts: Vec<(usize, i64)> = vals
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
            .collect();
        let mut hull: Vec<(usize, i64)> = Vec::new();
        for &pt in &pts {
            while hull.len() >= 2 {
                let (x1, y1) = hull[hull.len() - 2];
                let (x2, y2) = hull[hull.len() - 1];
                // Drop the middle point when it lies on or above the chord.
                let lhs = (y2 - y1) as i128 * (pt.0 - x1) as i128;
                let rhs = (pt.1 - y1) as i128 * (x2 - x1) as i128;
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        for seg in hull.windows(2) {
            let (i0, v0) = seg[0];
            let (i1, v1) = seg[1];
            let len = (i1 - i0) as i64;
            if (v0 - v1) % len != 0 {
                return Ok(false);
            }
            let s = (v0 - v1) / len;
            let residual: Vec<Vec<u64>> = (i0..=i1)
                .map(|i| match vals[i] {
                    Some(v) if v == v0 - s * (i - i0) as i64 => self.reduce(&self.div_p_pow(&h[i], v)),
                    _ => self.fq.zero(),
                })
                .collect();
            let Some(roots) = self.residual_roots(&residual) else {
                return Ok(false);
            };
            for (r, mult) in roots {
                if mult >= 2 {
                    let centre = self.scale_p_pow(&self.lift(&r), s);
                    let shifted = self.shift(&h, &centre);
                    if !self.cluster(shifted, mult, depth + 1, max_depth)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// True iff every root of the squarefree polynomial `g` (degree ≤ 4) generates an
/// extension of ℚ_p that is unramified.
pub fn splitting_field_unramified(g: &QPoly, p: u64) -> Result<bool> {
    if g.is_zero() {
        return Err(PicardError::Degenerate("zero polynomial".into()));
    }
    if !g.is_squarefree() {
        return Err(PicardError::NotSquarefree);
    }
    let mut h = g.monic();
    for r in g.rational_roots() {
        h = h.div_rem(&QPoly::linear_root(&r)).0;
    }
    if h.degree().unwrap_or(0) <= 1 {
        return Ok(true);
    }
    let ints = h.primitive_integer();
    let n = ints.len() - 1;
    let lc = ints[n].clone();
    // Monic H(x) = lc^{n-1} h(x / lc) with the same root fields.
    let monic: Vec<BigInt> = ints
        .iter()
        .enumerate()
        .map(|(i, c)| if i == n { BigInt::one() } else { c * lc.pow((n - 1 - i) as u32) })
        .collect();
    let hq = QPoly::from_bigints(&monic);
    let disc = hq.discriminant();
    let vdisc = valuation(&disc, p).unwrap();
    if vdisc == 0 {
        return Ok(true);
    }
    let ring = UnramRing::new(p);
    let hpoly: Vec<Elem> = monic.iter().map(|c| ring.from_int(c.clone())).collect();
    let residue: Vec<Vec<u64>> = hpoly.iter().map(|c| ring.reduce(c)).collect();
    let Some(roots) = ring.residual_roots(&residue) else {
        return Ok(false);
    };
    let max_depth = vdisc as usize + 2;
    for (r, mult) in roots {
        if mult >= 2 {
            let shifted = ring.shift(&hpoly, &ring.lift(&r));
            if !ring.cluster(shifted, mult, 1, max_depth)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::rat;

    fn poly(c: &[i64]) -> QPoly {
        QPoly::from_ints(c)
    }

    #[test]
    fn cube_root_of_two() {
        assert!(splitting_field_unramified(&poly(&[-2, 0, 0, 1]), 5).unwrap());
        assert!(!splitting_field_unramified(&poly(&[-2, 0, 0, 1]), 2).unwrap());
        // ℚ(∛2, ζ₃) is ramified at 3 as well.
        assert!(!splitting_field_unramified(&poly(&[-2, 0, 0, 1]), 3).unwrap());
    }

    #[test]
    fn rational_roots_are_unramified() {
        let p = 7;
        let g = &(&(&QPoly::x() * &poly(&[-1, 1])) * &poly(&[-1 - p, 1])) * &poly(&[1, 1]);
        assert!(splitting_field_unramified(&g, p as u64).unwrap());
    }

    #[test]
    fn clustered_unramified_roots() {
        // x² − 3·7²: roots ±7√3 cluster at 0 but generate an unramified extension.
        assert!(splitting_field_unramified(&poly(&[-147, 0, 1]), 7).unwrap());
        // x² − 7 is ramified.
        assert!(!splitting_field_unramified(&poly(&[-7, 0, 1]), 7).unwrap());
        // x² − 7³ is ramified (odd valuation).
        assert!(!splitting_field_unramified(&poly(&[-343, 0, 1]), 7).unwrap());
        // (x−1)² − 3·7⁴ after the shift: unramified.
        let g = &poly(&[-1, 1]).pow(2) - &QPoly::constant(rat(3 * 2401));
        assert!(splitting_field_unramified(&g, 7).unwrap());
    }

    #[test]
    fn gaussian_field_at_two() {
        // ℚ(i) is ramified at 2, ℚ(√−3) is not.
        assert!(!splitting_field_unramified(&poly(&[1, 0, 1]), 2).unwrap());
        assert!(splitting_field_unramified(&poly(&[1, 1, 1]), 2).unwrap());
        assert!(splitting_field_unramified(&poly(&[3, 0, 1]), 2).unwrap());
    }

    #[test]
    fn rejects_non_squarefree() {
        assert_eq!(
            splitting_field_unramified(&poly(&[1, 2, 1]), 5),
            Err(PicardError::NotSquarefree)
        );
    }
}
