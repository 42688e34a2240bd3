use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::kronecker;
use crate::error::{Error, Result};

/// Weights carrying a one-dimensional space of level-1 cusp forms.
pub const LEVEL1_WEIGHTS: [u32; 6] = [12, 16, 18, 20, 22, 26];

/// Real Dirichlet character: trivial, or `kronecker(d, .)` for a fundamental
/// discriminant `d != 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DirichletChar {
    Trivial,
    Kronecker(i64),
}

impl DirichletChar {
    pub fn value(&self, n: u64) -> i32 {
        match *self {
            DirichletChar::Trivial => 1,
            DirichletChar::Kronecker(d) => kronecker(d, n),
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, DirichletChar::Trivial)
    }

    pub fn conductor(&self) -> u64 {
        match *self {
            DirichletChar::Trivial => 1,
            DirichletChar::Kronecker(d) => d.unsigned_abs(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DirichletChar::Trivial => Ok(()),
            DirichletChar::Kronecker(d) if d != 1 && is_fundamental_discriminant(d) => Ok(()),
            DirichletChar::Kronecker(d) => Err(Error::Domain(format!(
                "{d} is not a fundamental discriminant of a quadratic field"
            ))),
        }
    }
}

impl fmt::Display for DirichletChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DirichletChar::Trivial => write!(f, "1"),
            DirichletChar::Kronecker(d) => write!(f, "{d}"),
        }
    }
}

impl FromStr for DirichletChar {
    type Err = Error;

    /// `1` is the trivial character, any other integer `d` names `kronecker(d, .)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix("kron(")
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s);
        let d: i64 = s
            .parse()
            .map_err(|_| Error::Domain(format!("bad character spec `{s}`")))?;
        let chi = if d == 1 {
            DirichletChar::Trivial
        } else {
            DirichletChar::Kronecker(d)
        };
        chi.validate()?;
        Ok(chi)
    }
}

/// Which automorphic object supplies the eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormSpec {
    /// The unique normalized cusp form of the given weight on `SL2(Z)`.
    Level1Holomorphic { weight: u32 },
    /// Weight-2 newform of level 32 attached to `y^2 = x^3 - x`.
    CMGaussian,
    /// Isobaric sum `psi1 + psi2` of two characters.
    Isobaric {
        psi1: DirichletChar,
        psi2: DirichletChar,
    },
    /// Induction of the trivial character from `Q(sqrt d)`: eigenvalues count
    /// ideals of norm `n`.
    TrivialQuadratic { d: i64 },
}

impl FormSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FormSpec::Level1Holomorphic { weight } => {
                if LEVEL1_WEIGHTS.contains(&weight) {
                    Ok(())
                } else {
                    Err(Error::Domain(format!(
                        "weight {weight} not in {LEVEL1_WEIGHTS:?}"
                    )))
                }
            }
            FormSpec::CMGaussian => Ok(()),
            FormSpec::Isobaric { psi1, psi2 } => {
                psi1.validate()?;
                psi2.validate()
            }
            FormSpec::TrivialQuadratic { d } => DirichletChar::Kronecker(d).validate(),
        }
    }

    /// Whether eigenvalues at arbitrary primes come from a closed formula
    /// rather than a precomputed table.
    pub fn has_closed_form(&self) -> bool {
        !matches!(self, FormSpec::Level1Holomorphic { .. })
    }

    /// Whether the form is cuspidal (only the isobaric sums are not).
    pub fn is_cuspidal(&self) -> bool {
        matches!(
            self,
            FormSpec::Level1Holomorphic { .. } | FormSpec::CMGaussian
        )
    }

    /// Primes where the local factor degenerates; there `lambda(p^e) = lambda(p)^e`.
    pub fn is_ramified(&self, p: u64) -> bool {
        match *self {
            FormSpec::Level1Holomorphic { .. } => false,
            FormSpec::CMGaussian => p == 2,
            FormSpec::Isobaric { psi1, psi2 } => {
                psi1.conductor() % p == 0 || psi2.conductor() % p == 0
            }
            FormSpec::TrivialQuadratic { d } => d.unsigned_abs() % p == 0,
        }
    }

    /// Value of the central character at an unramified prime; the Hecke
    /// recursion is `lambda(p^{e+1}) = lambda(p) lambda(p^e) - omega(p) lambda(p^{e-1})`.
    pub fn central_character(&self, p: u64) -> i32 {
        match self.characters() {
            Some((a, b)) => a.value(p) * b.value(p),
            None => 1,
        }
    }

    /// The two characters whose convolution gives the eigenvalues, for the
    /// noncuspidal variants.
    pub fn characters(&self) -> Option<(DirichletChar, DirichletChar)> {
        match *self {
            FormSpec::Isobaric { psi1, psi2 } => Some((psi1, psi2)),
            FormSpec::TrivialQuadratic { d } => {
                Some((DirichletChar::Trivial, DirichletChar::Kronecker(d)))
            }
            _ => None,
        }
    }

    /// Normalisation exponent: `lambda(n) = a(n) / n^{(k-1)/2}`, as `k - 1`.
    pub(crate) fn twice_weight_shift(&self) -> u32 {
        match *self {
            FormSpec::Level1Holomorphic { weight } => weight - 1,
            FormSpec::CMGaussian => 1,
            _ => 0,
        }
    }

    /// Filename-safe identifier.
    pub fn slug(&self) -> String {
        self.to_string()
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect()
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormSpec::Level1Holomorphic { weight } => write!(f, "level1:{weight}"),
            FormSpec::CMGaussian => write!(f, "cm-gaussian"),
            FormSpec::Isobaric { psi1, psi2 } => write!(f, "isobaric:{psi1},{psi2}"),
            FormSpec::TrivialQuadratic { d } => write!(f, "trivial-quadratic:{d}"),
        }
    }
}

impl FromStr for FormSpec {
    type Err = Error;

    /// Accepts `level1:<k>` (alias `delta` for weight 12), `cm-gaussian`,
    /// `isobaric:<chi>,<chi>` and `trivial-quadratic:<d>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a.trim())),
            None => (s, None),
        };
        let spec = match (head, arg) {
            ("delta", None) => FormSpec::Level1Holomorphic { weight: 12 },
            ("level1", Some(k)) => FormSpec::Level1Holomorphic {
                weight: k
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad weight `{k}`")))?,
            },
            ("cm-gaussian", None) => FormSpec::CMGaussian,
            ("isobaric", Some(pair)) => {
                let (a, b) = pair
                    .split_once(',')
                    .ok_or_else(|| Error::Domain(format!("isobaric needs two characters: `{pair}`")))?;
                FormSpec::Isobaric {
                    psi1: a.parse()?,
                    psi2: b.parse()?,
                }
            }
            ("trivial-quadratic", Some(d)) => FormSpec::TrivialQuadratic {
                d: d.parse()
                    .map_err(|_| Error::Domain(format!("bad discriminant `{d}`")))?,
            },
            _ => return Err(Error::Domain(format!("unknown form spec `{s}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn is_squarefree(mut n: u64) -> bool {
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return false;
            }
        }
        d += 1;
    }
    true
}

/// Fundamental discriminants: `d = 1 mod 4` squarefree, or `d = 4m` with
/// `m = 2, 3 mod 4` squarefree.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for text in [
            "level1:12",
            "level1:26",
            "cm-gaussian",
            "isobaric:1,1",
            "isobaric:1,-4",
            "isobaric:-3,5",
            "trivial-quadratic:-4",
            "trivial-quadratic:8",
        ] {
            let spec: FormSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert_eq!(
            "delta".parse::<FormSpec>().unwrap(),
            FormSpec::Level1Holomorphic { weight: 12 }
        );
        assert_eq!(
            "isobaric:1,kron(-4)".parse::<FormSpec>().unwrap(),
            FormSpec::Isobaric {
                psi1: DirichletChar::Trivial,
                psi2: DirichletChar::Kronecker(-4)
            }
        );
    }

    #[test]
    fn rejects_invalid() {
        assert!("level1:14".parse::<FormSpec>().is_err());
        assert!("trivial-quadratic:-1".parse::<FormSpec>().is_err());
        assert!("trivial-quadratic:12".parse::<FormSpec>().is_ok());
        assert!("trivial-quadratic:-16".parse::<FormSpec>().is_err());
        assert!("isobaric:1".parse::<FormSpec>().is_err());
        assert!("maass".parse::<FormSpec>().is_err());
    }

    #[test]
    fn fundamental_discriminants() {
        let fund: Vec<i64> = (-30..=30).filter(|&d| is_fundamental_discriminant(d)).collect();
        assert_eq!(
            fund,
            vec![-24, -23, -20, -19, -15, -11, -8, -7, -4, -3, 1, 5, 8, 12, 13, 17, 21, 24, 28, 29]
        );
    }

    #[test]
    fn ramification() {
        assert!(FormSpec::CMGaussian.is_ramified(2));
        assert!(!FormSpec::CMGaussian.is_ramified(3));
        let t = FormSpec::TrivialQuadratic { d: -20 };
        assert!(t.is_ramified(2) && t.is_ramified(5) && !t.is_ramified(3));
    }
}
