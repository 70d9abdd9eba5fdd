//! The closed-form answer, read off from binomial valuations alone.

use num_bigint::BigInt;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::arith::{binom_int, vp_binom, Prime};

use super::page::SlotShape;
use super::SsConfig;

/// `Lambda(gamma_{n-k+2}, ..., gamma_n) (x) Z_(p)[[x]]/I` with
/// `I = (C(n, j) x^j : n - k < j <= n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub n: usize,
    pub k: usize,
    pub p: Prime,
    /// `2j - 1` for `j = n-k+2..=n`.
    pub gamma_degrees: Vec<usize>,
    /// `(C(n, j), j)` for `j = n-k+1..=n`.
    #[serde(serialize_with = "ideal_as_json")]
    pub ideal: Vec<(BigInt, usize)>,
    /// `e_j = min_{n-k+1 <= i <= j} v_p(C(n, i))` for `j = n-k+1..=n`.
    pub staircase: Vec<u64>,
    /// The `j` at which `e_j` strictly drops (the first index counts).
    pub minimal_generators: Vec<usize>,
    /// `s_j = max(0, e_{j-1} - v_p(C(n, j)))` for `j = n-k+2..=n`.
    pub gamma_multipliers: Vec<u64>,
}

/// Integers that fit in a `u64` become JSON numbers, larger ones strings.
fn ideal_as_json<S: Serializer>(ideal: &[(BigInt, usize)], ser: S) -> Result<S::Ok, S::Error> {
    let mut seq = ser.serialize_seq(Some(ideal.len()))?;
    for (c, j) in ideal {
        let c = match u64::try_from(c) {
            Ok(v) => BigOrSmall::Small(v),
            Err(_) => BigOrSmall::Big(c.to_string()),
        };
        seq.serialize_element(&(c, j))?;
    }
    seq.end()
}

#[derive(Serialize)]
#[serde(untagged)]
enum BigOrSmall {
    Small(u64),
    Big(String),
}

pub fn presentation_closed_form(cfg: &SsConfig) -> Presentation {
    let (n, k, p) = (cfg.n, cfg.k, cfg.p);
    let lo = n - k + 1;
    let ideal: Vec<(BigInt, usize)> = (lo..=n).map(|j| (binom_int(n as u64, j as i64), j)).collect();
    let vals: Vec<u64> = (lo..=n).map(|j| vp_binom(n as u64, j as u64, p).finite().expect("j <= n") as u64).collect();
    let mut staircase = Vec::with_capacity(vals.len());
    let mut minimal_generators = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        let prev = staircase.last().copied();
        let e = prev.map_or(v, |m: u64| m.min(v));
        if prev.is_none_or(|m| e < m) {
            minimal_generators.push(lo + i);
        }
        staircase.push(e);
    }
    let gamma_multipliers = (1..vals.len()).map(|i| staircase[i - 1].saturating_sub(vals[i])).collect();
    Presentation {
        n,
        k,
        p,
        gamma_degrees: (lo + 1..=n).map(|j| 2 * j - 1).collect(),
        ideal,
        staircase,
        minimal_generators,
        gamma_multipliers,
    }
}

impl Presentation {
    fn lo(&self) -> usize {
        self.n - self.k + 1
    }

    /// `e_t` for any `t >= n-k+1` (constant past `n`).
    pub fn staircase_at(&self, t: usize) -> Option<u64> {
        if t < self.lo() {
            return None;
        }
        Some(self.staircase[(t - self.lo()).min(self.staircase.len() - 1)])
    }

    /// Module in x-degree `t`: free for `t <= n-k`, `Z/p^{e_t}` after.
    pub fn x_column(&self, t: usize) -> SlotShape {
        match self.staircase_at(t) {
            None => SlotShape { free_rank: 1, torsion: Vec::new() },
            Some(0) => SlotShape::default(),
            Some(e) => SlotShape { free_rank: 0, torsion: vec![e as u32] },
        }
    }

    /// Rank of the exterior algebra on the gammas in degree `q`.
    pub fn exterior_rank(&self, q: usize) -> usize {
        let mut counts = vec![0usize; q + 1];
        counts[0] = 1;
        for &d in &self.gamma_degrees {
            for total in (d..=q).rev() {
                counts[total] += counts[total - d];
            }
        }
        counts[q]
    }

    /// `s_j` for `n-k+2 <= j <= n`.
    pub fn gamma_multiplier(&self, j: usize) -> Option<u64> {
        (j > self.lo() && j <= self.n).then(|| self.gamma_multipliers[j - self.lo() - 1])
    }

    /// `(c, j)` pairs at the minimal generators.
    pub fn minimal_ideal(&self) -> Vec<(BigInt, usize)> {
        self.ideal.iter().filter(|(_, j)| self.minimal_generators.contains(j)).cloned().collect()
    }

    /// One-line human-readable form.
    pub fn render(&self) -> String {
        let gens: Vec<String> = self
            .minimal_ideal()
            .iter()
            .map(|(c, j)| {
                let x = if *j == 1 { "x".to_string() } else { format!("x^{j}") };
                if c == &BigInt::from(1) {
                    x
                } else {
                    format!("{c}*{x}")
                }
            })
            .collect();
        let gammas: Vec<String> = (self.lo() + 1..=self.n).map(|j| format!("gamma{j}")).collect();
        let ring = format!("Z_({})[[x]]/({})", self.p.get(), gens.join(", "));
        if gammas.is_empty() {
            ring
        } else {
            format!("Lambda({}) (x) {}", gammas.join(", "), ring)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(n: usize, k: usize, p: Prime) -> Presentation {
        presentation_closed_form(&SsConfig::new(n, k, p).unwrap())
    }

    #[test]
    fn projective_spaces() {
        for n in 1..=20 {
            for p in [2, 3, 5] {
                let pr = pres(n, 1, Prime::new(p).unwrap());
                assert_eq!(pr.ideal, vec![(BigInt::from(1), n)]);
                assert!(pr.gamma_degrees.is_empty());
                assert_eq!(pr.minimal_generators, vec![n]);
            }
        }
    }

    #[test]
    fn eight_three() {
        let pr = pres(8, 3, Prime::TWO);
        let ideal: Vec<(i64, usize)> = pr.ideal.iter().map(|(c, j)| (i64::try_from(c).unwrap(), *j)).collect();
        assert_eq!(ideal, [(28, 6), (8, 7), (1, 8)]);
        assert_eq!(pr.staircase, [2, 2, 0]);
        assert_eq!(pr.minimal_generators, [6, 8]);
        assert_eq!(pr.gamma_multipliers, [0, 2]);
        assert_eq!(pr.gamma_degrees, [13, 15]);
        assert_eq!(pr.render(), "Lambda(gamma7, gamma8) (x) Z_(2)[[x]]/(28*x^6, x^8)");
    }

    #[test]
    fn six_three() {
        let pr = pres(6, 3, Prime::TWO);
        assert_eq!(pr.minimal_generators, [4]);
        assert_eq!(pr.gamma_degrees, [9, 11]);
        assert_eq!(pr.x_column(3).to_string(), "Z");
        assert_eq!(pr.x_column(4).to_string(), "0");
    }

    #[test]
    fn staircase_non_increasing_and_ends_at_zero() {
        for n in 1..=30 {
            for k in 1..=n {
                let pr = pres(n, k, Prime::TWO);
                assert!(pr.staircase.windows(2).all(|w| w[0] >= w[1]));
                assert_eq!(*pr.staircase.last().unwrap(), 0);
            }
        }
    }

    #[test]
    fn json_field_order() {
        let s = serde_json::to_string(&pres(4, 1, Prime::TWO)).unwrap();
        assert_eq!(
            s,
            r#"{"n":4,"k":1,"p":2,"gamma_degrees":[],"ideal":[[1,4]],"staircase":[0],"minimal_generators":[4],"gamma_multipliers":[]}"#
        );
    }

    #[test]
    fn exterior_ranks() {
        let pr = pres(5, 3, Prime::TWO);
        // gammas in degrees 7 and 9
        let ranks: Vec<usize> = [0, 7, 9, 16, 8].iter().map(|&q| pr.exterior_rank(q)).collect();
        assert_eq!(ranks, [1, 1, 1, 1, 0]);
    }
}
