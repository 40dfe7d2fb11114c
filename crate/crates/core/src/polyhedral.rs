//! Exact Fourier–Motzkin elimination over integer-coefficient systems.
//!
//! A system is a list of constraints `a·x + c ≥ 0` (or `> 0` when strict) in
//! rational unknowns `x`. Elimination keeps every stage so that feasible points
//! can be recovered by back-substitution and integer points enumerated
//! coordinate by coordinate.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::intlin::gcd_of;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub coeffs: Vec<BigInt>,
    pub constant: BigInt,
    pub strict: bool,
}

impl Constraint {
    pub fn geq(coeffs: Vec<BigInt>, constant: BigInt) -> Self {
        Constraint {
            coeffs,
            constant,
            strict: false,
        }
    }

    pub fn gt(coeffs: Vec<BigInt>, constant: BigInt) -> Self {
        Constraint {
            coeffs,
            constant,
            strict: true,
        }
    }

    /// `a·x + c = 0` as a pair of inequalities.
    pub fn eq(coeffs: Vec<BigInt>, constant: BigInt) -> [Self; 2] {
        let neg: Vec<BigInt> = coeffs.iter().map(|x| -x).collect();
        [
            Constraint::geq(coeffs, constant.clone()),
            Constraint::geq(neg, -constant),
        ]
    }

    fn normalized(mut self) -> Self {
        let mut all = self.coeffs.clone();
        all.push(self.constant.clone());
        let g = gcd_of(&all);
        if !g.is_zero() && !g.is_one() {
            for x in self.coeffs.iter_mut() {
                *x /= &g;
            }
            self.constant /= &g;
        }
        self
    }

    fn constant_holds(&self) -> bool {
        if self.strict {
            self.constant.is_positive()
        } else {
            !self.constant.is_negative()
        }
    }
}

#[derive(Clone, Debug)]
pub struct System {
    dim: usize,
    constraints: Vec<Constraint>,
}

/// Outcome of integer-point enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumeration {
    Points(Vec<Vec<BigInt>>),
    Unbounded,
}

impl System {
    pub fn new(dim: usize) -> Self {
        System {
            dim,
            constraints: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn push(&mut self, c: Constraint) {
        debug_assert_eq!(c.coeffs.len(), self.dim);
        self.constraints.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Constraint>) {
        for c in cs {
            self.push(c);
        }
    }

    /// `stages[k]` only involves `x_0 … x_{k-1}`; `stages[dim]` is the input.
    fn stages(&self) -> Vec<Vec<Constraint>> {
        let mut stages = vec![dedup(self.constraints.clone())];
        for var in (0..self.dim).rev() {
            let next = eliminate(stages.last().expect("nonempty"), var);
            stages.push(next);
        }
        stages.reverse();
        stages
    }

    pub fn is_feasible(&self) -> bool {
        self.stages()[0].iter().all(Constraint::constant_holds)
    }

    /// A rational point satisfying every constraint, if one exists.
    pub fn find_point(&self) -> Option<Vec<BigRational>> {
        let stages = self.stages();
        if !stages[0].iter().all(Constraint::constant_holds) {
            return None;
        }
        let mut x: Vec<BigRational> = Vec::with_capacity(self.dim);
        for k in 0..self.dim {
            let (lo, hi) = rational_bounds(&stages[k + 1], &x, k);
            let value = match (lo, hi) {
                (None, None) => BigRational::zero(),
                (Some((l, ls)), None) => {
                    if ls {
                        l + BigRational::one()
                    } else {
                        l
                    }
                }
                (None, Some((h, hs))) => {
                    if hs {
                        h - BigRational::one()
                    } else {
                        h
                    }
                }
                (Some((l, _)), Some((h, _))) => {
                    if l == h {
                        l
                    } else {
                        (l + h) / BigRational::from_integer(BigInt::from(2))
                    }
                }
            };
            x.push(value);
        }
        Some(x)
    }

    /// All integer points, or `Unbounded` if the rational solution set is
    /// nonempty and unbounded.
    pub fn integer_points(&self) -> Enumeration {
        let stages = self.stages();
        if !stages[0].iter().all(Constraint::constant_holds) {
            return Enumeration::Points(Vec::new());
        }
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(self.dim);
        if enumerate_from(&stages, &mut prefix, &mut out) {
            Enumeration::Points(out)
        } else {
            Enumeration::Unbounded
        }
    }
}

fn dedup(cs: Vec<Constraint>) -> Vec<Constraint> {
    let set: BTreeSet<Constraint> = cs.into_iter().map(Constraint::normalized).collect();
    let mut out: Vec<Constraint> = set.into_iter().collect();
    // A strict constraint makes its non-strict twin redundant.
    let stricts: BTreeSet<(Vec<BigInt>, BigInt)> = out
        .iter()
        .filter(|c| c.strict)
        .map(|c| (c.coeffs.clone(), c.constant.clone()))
        .collect();
    out.retain(|c| c.strict || !stricts.contains(&(c.coeffs.clone(), c.constant.clone())));
    out
}

fn eliminate(cs: &[Constraint], var: usize) -> Vec<Constraint> {
    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for c in cs {
        if c.coeffs[var].is_positive() {
            pos.push(c);
        } else if c.coeffs[var].is_negative() {
            neg.push(c);
        } else {
            rest.push(c.clone());
        }
    }
    for p in &pos {
        for n in &neg {
            let a = p.coeffs[var].clone();
            let b = -&n.coeffs[var];
            let coeffs: Vec<BigInt> = p
                .coeffs
                .iter()
                .zip(&n.coeffs)
                .map(|(x, y)| &b * x + &a * y)
                .collect();
            let constant = &b * &p.constant + &a * &n.constant;
            rest.push(Constraint {
                coeffs,
                constant,
                strict: p.strict || n.strict,
            });
        }
    }
    dedup(rest)
}

type Bound = Option<(BigRational, bool)>;

/// Tightest rational bounds on `x_k` given fixed `x_0 … x_{k-1}`.
fn rational_bounds(cs: &[Constraint], prefix: &[BigRational], k: usize) -> (Bound, Bound) {
    let mut lo: Bound = None;
    let mut hi: Bound = None;
    for c in cs {
        let a = &c.coeffs[k];
        if a.is_zero() {
            continue;
        }
        let rest: BigRational = prefix
            .iter()
            .zip(&c.coeffs)
            .map(|(x, ci)| x * BigRational::from_integer(ci.clone()))
            .sum::<BigRational>()
            + BigRational::from_integer(c.constant.clone());
        let t = -rest / BigRational::from_integer(a.clone());
        if a.is_positive() {
            if lo
                .as_ref()
                .is_none_or(|(l, ls)| t > *l || (t == *l && c.strict && !ls))
            {
                lo = Some((t, c.strict));
            }
        } else if hi
            .as_ref()
            .is_none_or(|(h, hs)| t < *h || (t == *h && c.strict && !hs))
        {
            hi = Some((t, c.strict));
        }
    }
    (lo, hi)
}

/// Returns false if an unbounded coordinate is met.
fn enumerate_from(
    stages: &[Vec<Constraint>],
    prefix: &mut Vec<BigInt>,
    out: &mut Vec<Vec<BigInt>>,
) -> bool {
    let k = prefix.len();
    if k == stages.len() - 1 {
        out.push(prefix.clone());
        return true;
    }
    let mut lo: Option<BigInt> = None;
    let mut hi: Option<BigInt> = None;
    for c in &stages[k + 1] {
        let rest: BigInt = prefix
            .iter()
            .zip(&c.coeffs)
            .map(|(x, ci)| x * ci)
            .sum::<BigInt>()
            + &c.constant;
        let a = &c.coeffs[k];
        if a.is_zero() {
            let holds = if c.strict {
                rest.is_positive()
            } else {
                !rest.is_negative()
            };
            if !holds {
                return true;
            }
            continue;
        }
        // a·x + rest ≥ 0 (or > 0)
        if a.is_positive() {
            let b = if c.strict {
                (-&rest).div_floor(a) + 1
            } else {
                ceil_div(&-&rest, a)
            };
            if lo.as_ref().is_none_or(|l| b > *l) {
                lo = Some(b);
            }
        } else {
            let na = -a;
            let b = if c.strict {
                ceil_div(&rest, &na) - 1
            } else {
                rest.div_floor(&na)
            };
            if hi.as_ref().is_none_or(|h| b < *h) {
                hi = Some(b);
            }
        }
    }
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return false;
    };
    let mut x = lo;
    while x <= hi {
        prefix.push(x.clone());
        let ok = enumerate_from(stages, prefix, out);
        prefix.pop();
        if !ok {
            return false;
        }
        x += 1;
    }
    true
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}
