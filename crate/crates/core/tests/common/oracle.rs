//! Exact reference implementations used to check the library.
//!
//! Every f64 is a dyadic rational `m * 2^e`, so sums and products of inputs
//! are evaluated exactly on big integers without any division.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{Float, Signed, Zero};
use std::cmp::Ordering;

#[derive(Clone, Debug)]
pub struct Dyadic {
    m: BigInt,
    e: i32,
}

impl Dyadic {
    pub fn from_f64(v: f64) -> Self {
        assert!(v.is_finite());
        if v == 0.0 {
            return Dyadic {
                m: BigInt::zero(),
                e: 0,
            };
        }
        let (mantissa, exp, sign) = v.integer_decode();
        Dyadic {
            m: BigInt::from(mantissa) * i64::from(sign),
            e: i32::from(exp),
        }
    }

    fn align(&self, other: &Dyadic) -> (BigInt, BigInt, i32) {
        let e = self.e.min(other.e);
        (
            &self.m << ((self.e - e) as usize),
            &other.m << ((other.e - e) as usize),
            e,
        )
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        let (a, b, e) = self.align(o);
        Dyadic { m: a + b, e }
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        let (a, b, e) = self.align(o);
        Dyadic { m: a - b, e }
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic {
            m: &self.m * &o.m,
            e: self.e + o.e,
        }
    }

    pub fn sign(&self) -> i8 {
        if self.m.is_zero() {
            0
        } else if self.m.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn cmp_value(&self, o: &Dyadic) -> Ordering {
        self.sub(o).sign().cmp(&0)
    }
}

fn d(v: f64) -> Dyadic {
    Dyadic::from_f64(v)
}

/// Exact sign of the orientation determinant.
pub fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> i8 {
    let (ax, ay, bx, by, cx, cy) = (d(a.0), d(a.1), d(b.0), d(b.1), d(c.0), d(c.1));
    let l = bx.sub(&ax).mul(&cy.sub(&ay));
    let r = by.sub(&ay).mul(&cx.sub(&ax));
    l.sub(&r).sign()
}

/// Exact sign of the in-circle determinant (positive: inside for CCW abc).
pub fn incircle(a: (f64, f64), b: (f64, f64), c: (f64, f64), p: (f64, f64)) -> i8 {
    let (px, py) = (d(p.0), d(p.1));
    let row = |q: (f64, f64)| {
        let x = d(q.0).sub(&px);
        let y = d(q.1).sub(&py);
        let w = x.mul(&x).add(&y.mul(&y));
        (x, y, w)
    };
    let (ax, ay, aw) = row(a);
    let (bx, by, bw) = row(b);
    let (cx, cy, cw) = row(c);
    let t1 = ax.mul(&by.mul(&cw).sub(&bw.mul(&cy)));
    let t2 = ay.mul(&bx.mul(&cw).sub(&bw.mul(&cx)));
    let t3 = aw.mul(&bx.mul(&cy).sub(&by.mul(&cx)));
    t1.sub(&t2).add(&t3).sign()
}

/// Result of the brute-force Delaunay enumeration.
pub struct BruteDelaunay {
    /// Sorted vertex triples whose circumcircle has no site strictly inside
    /// and no site on it.
    pub triangles: Vec<[usize; 3]>,
    /// Whether some four sites are cocircular (with three of them not
    /// collinear).
    pub cocircular: bool,
}

/// O(n^4) enumeration of empty-circumcircle triangles.
pub fn brute_delaunay(pts: &[(f64, f64)]) -> BruteDelaunay {
    let n = pts.len();
    let mut triangles = Vec::new();
    let mut cocircular = false;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let o = orient(pts[i], pts[j], pts[k]);
                if o == 0 {
                    continue;
                }
                let (a, b, c) = if o > 0 {
                    (pts[i], pts[j], pts[k])
                } else {
                    (pts[i], pts[k], pts[j])
                };
                let mut empty = true;
                for (m, &q) in pts.iter().enumerate() {
                    if m == i || m == j || m == k {
                        continue;
                    }
                    match incircle(a, b, c, q) {
                        1 => {
                            empty = false;
                            break;
                        }
                        0 => {
                            cocircular = true;
                            empty = false;
                        }
                        _ => {}
                    }
                }
                if empty {
                    triangles.push([i, j, k]);
                }
            }
        }
    }
    BruteDelaunay { triangles, cocircular }
}

/// Whether no site lies strictly inside the circumcircle of `t` (given CCW).
pub fn is_empty_circle(pts: &[(f64, f64)], t: [usize; 3]) -> bool {
    (0..pts.len())
        .filter(|m| !t.contains(m))
        .all(|m| incircle(pts[t[0]], pts[t[1]], pts[t[2]], pts[m]) <= 0)
}

/// Number of sites on the convex hull boundary, collinear ones included, by
/// testing every site against every candidate supporting line.
pub fn hull_site_count(pts: &[(f64, f64)]) -> usize {
    let n = pts.len();
    let mut on_hull = vec![false; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            // i -> j is a hull edge (interior on the left) if nobody is right of it.
            let supporting = (0..n).all(|k| orient(pts[i], pts[j], pts[k]) >= 0);
            if supporting {
                for k in 0..n {
                    if orient(pts[i], pts[j], pts[k]) == 0 {
                        on_hull[k] = true;
                    }
                }
            }
        }
    }
    on_hull.iter().filter(|h| **h).count()
}

pub fn sorted_triples(tris: &[[usize; 3]]) -> Vec<[usize; 3]> {
    let mut v: Vec<[usize; 3]> = tris
        .iter()
        .map(|t| {
            let mut s = *t;
            s.sort_unstable();
            s
        })
        .collect();
    v.sort_unstable();
    v
}

/// Small deterministic generator for test layouts (SplitMix64).
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}
