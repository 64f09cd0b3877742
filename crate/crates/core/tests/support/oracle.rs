//! Direct-summation reference implementations for three binary variables.
//!
//! Everything works on a dense `[f64; 8]` indexed by a bit per variable and
//! follows the textbook defining sum of each quantity literally, sharing no
//! code with the library beyond reading the pmf.

use multinfo_core::DiscreteDistribution;

#[derive(Clone, Copy, Debug)]
pub struct Dense3 {
    /// `p[s]` with bit `k` of `s` the value of variable `k`.
    pub p: [f64; 8],
}

fn lg(x: f64) -> f64 {
    x.log2()
}

/// Sub-states of `mask`: every `s` with no bits outside `mask`.
fn states(mask: u8) -> impl Iterator<Item = u8> {
    (0u8..8).filter(move |s| s & !mask == 0)
}

impl Dense3 {
    pub fn from_eighths(k: [u8; 8]) -> Self {
        let mut p = [0.0; 8];
        for (s, &c) in k.iter().enumerate() {
            p[s] = f64::from(c) / 8.0;
        }
        Dense3 { p }
    }

    pub fn from_dist(d: &DiscreteDistribution) -> Self {
        assert_eq!(d.alphabets(), [2, 2, 2]);
        let mut p = [0.0; 8];
        for (st, q) in d.iter() {
            p[(st[0] | st[1] << 1 | st[2] << 2) as usize] = q;
        }
        Dense3 { p }
    }

    pub fn to_dist(&self) -> DiscreteDistribution {
        let entries = (0..8u32).map(|s| (vec![s & 1, s >> 1 & 1, s >> 2 & 1], self.p[s as usize]));
        DiscreteDistribution::new(["X1", "X2", "Y"], [2, 2, 2], entries).unwrap()
    }

    /// Marginal probability that the variables in `mask` take the values in `s`.
    pub fn m(&self, mask: u8, s: u8) -> f64 {
        (0u8..8).filter(|t| t & mask == s & mask).map(|t| self.p[t as usize]).sum()
    }

    /// `−Σ p log p`.
    pub fn entropy(&self, mask: u8) -> f64 {
        states(mask)
            .map(|s| self.m(mask, s))
            .filter(|&q| q > 0.0)
            .map(|q| -q * lg(q))
            .sum()
    }

    /// `Σ p(a,b) log 1/p(a|b)`.
    pub fn conditional_entropy(&self, a: u8, b: u8) -> f64 {
        let mut acc = 0.0;
        for s in states(a | b) {
            let pab = self.m(a | b, s);
            if pab > 0.0 {
                acc += pab * lg(self.m(b, s) / pab);
            }
        }
        acc
    }

    /// `Σ p(a,b) log p(a,b) / (p(a) p(b))`.
    pub fn mi(&self, a: u8, b: u8) -> f64 {
        let mut acc = 0.0;
        for s in states(a | b) {
            let pab = self.m(a | b, s);
            if pab > 0.0 {
                acc += pab * lg(pab / (self.m(a, s) * self.m(b, s)));
            }
        }
        acc
    }

    /// `Σ p(a,b,c) log p(c) p(a,b,c) / (p(a,c) p(b,c))`.
    pub fn cmi(&self, a: u8, b: u8, c: u8) -> f64 {
        let mut acc = 0.0;
        for s in states(a | b | c) {
            let pabc = self.m(a | b | c, s);
            if pabc > 0.0 {
                acc += pabc * lg(self.m(c, s) * pabc / (self.m(a | c, s) * self.m(b | c, s)));
            }
        }
        acc
    }

    /// `I(X,Y;Z) − I(X;Z) − I(Y;Z)` over the three variables.
    pub fn ii(&self) -> f64 {
        self.mi(0b011, 0b100) - self.mi(0b001, 0b100) - self.mi(0b010, 0b100)
    }

    /// `I(X;Z) + I(Y;Z) − I(X,Y;Z)`.
    pub fn ci(&self) -> f64 {
        self.mi(0b001, 0b100) + self.mi(0b010, 0b100) - self.mi(0b011, 0b100)
    }

    /// KL divergence of the joint from the product of its marginals.
    pub fn tc(&self) -> f64 {
        let mut acc = 0.0;
        for s in 0u8..8 {
            let p = self.p[s as usize];
            if p > 0.0 {
                let prod = self.m(1, s) * self.m(2, s) * self.m(4, s);
                acc += p * lg(p / prod);
            }
        }
        acc
    }

    /// `H(S) − Σ_i H(X_i | S∖X_i)`.
    pub fn dtc(&self) -> f64 {
        self.entropy(0b111) - (0..3).map(|k| self.conditional_entropy(1 << k, 0b111 & !(1 << k))).sum::<f64>()
    }

    /// `Π_i p(x_i | y)` for sources `a`, `b` and target `t` (single bits).
    fn p_ind_given(&self, a: u8, b: u8, t: u8, s: u8) -> f64 {
        let py = self.m(t, s);
        (self.m(a | t, s) / py) * (self.m(b | t, s) / py)
    }

    /// `Σ_y p_ind(x | y) p(y)`.
    fn p_ind(&self, a: u8, b: u8, t: u8, s: u8) -> f64 {
        let x = s & (a | b);
        [0, t]
            .into_iter()
            .map(|yv| x | yv)
            .filter(|&sy| self.m(t, sy) > 0.0)
            .map(|sy| self.p_ind_given(a, b, t, sy) * self.m(t, sy))
            .sum()
    }

    /// `Σ_x p(x) Σ_y p(y|x) log p(y|x) / p_ind(y|x)` with Bayes for `p_ind(y|x)`.
    pub fn delta_i(&self, a: u8, b: u8, t: u8) -> f64 {
        let x_mask = a | b;
        let mut acc = 0.0;
        for x in states(x_mask) {
            let px = self.m(x_mask, x);
            if px == 0.0 {
                continue;
            }
            for yv in [0, t] {
                let s = x | yv;
                let pxy = self.m(x_mask | t, s);
                if pxy == 0.0 {
                    continue;
                }
                let p_y_given_x = pxy / px;
                let p_ind_y_given_x = self.p_ind_given(a, b, t, s) * self.m(t, s) / self.p_ind(a, b, t, s);
                acc += px * p_y_given_x * lg(p_y_given_x / p_ind_y_given_x);
            }
        }
        acc
    }

    /// `Σ p(x,y) log p_ind(x|y) / p_ind(x)`.
    pub fn gap(&self, a: u8, b: u8, t: u8) -> f64 {
        let mask = a | b | t;
        let mut acc = 0.0;
        for s in states(mask) {
            let pxy = self.m(mask, s);
            if pxy > 0.0 {
                acc += pxy * lg(self.p_ind_given(a, b, t, s) / self.p_ind(a, b, t, s));
            }
        }
        acc
    }

    /// `I(S;Y) − Σ_i I(X_i;Y)`.
    pub fn rsi(&self, a: u8, b: u8, t: u8) -> f64 {
        self.mi(a | b, t) - self.mi(a, t) - self.mi(b, t)
    }

    /// `I(S;Y) − max Σ_j I(S_j;Y)`; with two sources the only partition into
    /// several blocks is the pair of singletons.
    pub fn vs(&self, a: u8, b: u8, t: u8) -> f64 {
        self.mi(a | b, t) - (self.mi(a, t) + self.mi(b, t))
    }

    /// `Σ_x p(x|y) [log 1/p(y) − log 1/p(y|x)]` for target value `yv` (0 or `t`).
    pub fn i_spec(&self, x_mask: u8, t: u8, yv: u8) -> f64 {
        let py = self.m(t, yv);
        let mut acc = 0.0;
        for x in states(x_mask) {
            let pxy = self.m(x_mask | t, x | yv);
            if pxy > 0.0 {
                let p_x_given_y = pxy / py;
                let p_y_given_x = pxy / self.m(x_mask, x);
                acc += p_x_given_y * (lg(1.0 / py) - lg(1.0 / p_y_given_x));
            }
        }
        acc
    }

    /// `[redundancy, unique(a), unique(b), synergy]` from `I_min` and the
    /// three mutual-information sums.
    pub fn pid(&self, a: u8, b: u8, t: u8) -> [f64; 4] {
        let red: f64 = [0, t]
            .into_iter()
            .filter(|&yv| self.m(t, yv) > 0.0)
            .map(|yv| self.m(t, yv) * self.i_spec(a, t, yv).min(self.i_spec(b, t, yv)))
            .sum();
        let ua = self.mi(a, t) - red;
        let ub = self.mi(b, t) - red;
        let syn = self.mi(a | b, t) - ua - ub - red;
        [red, ua, ub, syn]
    }

    /// Every registry label for the split `(a, b) → t` with its reference value.
    pub fn report(&self, a: u8, b: u8, t: u8) -> Vec<(&'static str, f64)> {
        let [red, ua, ub, syn] = self.pid(a, b, t);
        vec![
            ("mi_x1", self.mi(a, t)),
            ("mi_x2", self.mi(b, t)),
            ("mi", self.mi(a | b, t)),
            ("ii", self.ii()),
            ("ci", self.ci()),
            ("tc", self.tc()),
            ("dtc", self.dtc()),
            ("delta_i", self.delta_i(a, b, t)),
            ("mi_delta_gap", self.gap(a, b, t)),
            ("rsi", self.rsi(a, b, t)),
            ("vs", self.vs(a, b, t)),
            ("pid_{1}{2}", red),
            ("pid_{1}", ua),
            ("pid_{2}", ub),
            ("pid_{12}", syn),
            ("entropy", self.entropy(0b111)),
            ("h_y", self.entropy(t)),
        ]
    }
}

/// All pmfs over 8 states whose probabilities are multiples of 1/8, as
/// counts out of 8 (C(15, 7) = 6435 of them).
pub fn eighth_grid() -> Vec<[u8; 8]> {
    fn rec(i: usize, left: u8, cur: &mut [u8; 8], out: &mut Vec<[u8; 8]>) {
        if i == 7 {
            cur[7] = left;
            out.push(*cur);
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, 8, &mut [0; 8], &mut out);
    out
}
