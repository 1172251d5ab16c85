//! Brute-force enumeration oracle. Uses its own `i128` fraction type and walks
//! the two-stage tree directly, so nothing here goes through `Experiment`,
//! `Event` or the closed forms under test.
#![allow(dead_code)]

use beautylab::{Coin, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frac(pub i128, pub i128);

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Frac {
    pub fn new(n: i128, d: i128) -> Frac {
        assert!(d != 0);
        let s = if d < 0 { -1 } else { 1 };
        let g = gcd(n, d).max(1);
        Frac(s * n / g, s * d / g)
    }
    pub fn zero() -> Frac {
        Frac(0, 1)
    }
    pub fn add(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
    }
    pub fn sub(self, o: Frac) -> Frac {
        self.add(Frac(-o.0, o.1))
    }
    pub fn mul(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.0, self.1 * o.1)
    }
    pub fn div(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.1, self.1 * o.0)
    }
    pub fn to_rational(self) -> Rational {
        Rational::new(self.0 as i64, self.1 as i64).unwrap()
    }
}

/// A leaf of the coin-then-current-state tree.
#[derive(Debug, Clone, Copy)]
pub struct Leaf {
    pub coin: Coin,
    pub day: u32,
    pub weight: Frac,
}

/// Stage one: coin with bias `p`. Stage two: a uniformly chosen awakening
/// of that branch (Heads has one, Tails has `n`).
pub fn current_state_leaves(p: Frac, n: u32) -> Vec<Leaf> {
    let q = Frac(1, 1).sub(p);
    let mut out = vec![Leaf {
        coin: Coin::Heads,
        day: 1,
        weight: p,
    }];
    for day in 1..=n {
        out.push(Leaf {
            coin: Coin::Tails,
            day,
            weight: q.mul(Frac(1, n as i128)),
        });
    }
    out
}

pub fn label_of(leaf: &Leaf) -> String {
    match leaf.coin {
        Coin::Heads => format!("H{}", leaf.day),
        Coin::Tails => format!("T{}", leaf.day),
    }
}

pub fn prob(leaves: &[Leaf], pred: impl Fn(&Leaf) -> bool) -> Frac {
    leaves
        .iter()
        .filter(|l| pred(l))
        .fold(Frac::zero(), |acc, l| acc.add(l.weight))
}

pub fn cond(
    leaves: &[Leaf],
    a: impl Fn(&Leaf) -> bool,
    given: impl Fn(&Leaf) -> bool,
) -> Option<Frac> {
    let g = prob(leaves, &given);
    if g.0 == 0 {
        return None;
    }
    Some(prob(leaves, |l| a(l) && given(l)).div(g))
}

/// Per-trial and per-awakening expected gain of betting on Heads at every
/// awakening, by listing each awakening of each coin outcome.
pub fn betting_by_enumeration(p: Frac, n: u32, cost: Frac, payoff: Frac) -> (Frac, Frac) {
    let q = Frac(1, 1).sub(p);
    let branches = [(p, 1u32, payoff.sub(cost)), (q, n, Frac(-cost.0, cost.1))];
    let mut gain = Frac::zero();
    let mut wakes = Frac::zero();
    for (w, count, per_bet) in branches {
        for _ in 0..count {
            gain = gain.add(w.mul(per_bet));
            wakes = wakes.add(w);
        }
    }
    (gain, gain.div(wakes))
}
