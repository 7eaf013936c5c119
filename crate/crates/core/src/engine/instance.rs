//! Bundled inputs for every checkable inequality, and their seeded generation.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::gen::{GenConfig, Sampler};
use crate::module::{ModuleElement, ModuleTuple, ProbabilityVector, ScalarCoefficients};
use crate::transforms::{TransformParams, DEFAULT_KERNEL_GUARD};

/// Symbolic tag of each checkable inequality family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityId {
    SchwarzModule,
    SchwarzAbs,
    SchwarzFunctional,
    SchwarzRadius,
    SchwarzSeminorm,
    Lemma31,
    Lemma41,
    Thm31,
    Thm42,
    Cor43,
    Rem44,
    Scalar12,
    Eq43,
    Eq45,
    Eq46,
}

impl InequalityId {
    pub const ALL: [InequalityId; 15] = [
        InequalityId::SchwarzModule,
        InequalityId::SchwarzAbs,
        InequalityId::SchwarzFunctional,
        InequalityId::SchwarzRadius,
        InequalityId::SchwarzSeminorm,
        InequalityId::Lemma31,
        InequalityId::Lemma41,
        InequalityId::Thm31,
        InequalityId::Thm42,
        InequalityId::Cor43,
        InequalityId::Rem44,
        InequalityId::Scalar12,
        InequalityId::Eq43,
        InequalityId::Eq45,
        InequalityId::Eq46,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::SchwarzModule => "schwarz_module",
            InequalityId::SchwarzAbs => "schwarz_abs",
            InequalityId::SchwarzFunctional => "schwarz_functional",
            InequalityId::SchwarzRadius => "schwarz_radius",
            InequalityId::SchwarzSeminorm => "schwarz_seminorm",
            InequalityId::Lemma31 => "lemma31",
            InequalityId::Lemma41 => "lemma41",
            InequalityId::Thm31 => "thm31",
            InequalityId::Thm42 => "thm42",
            InequalityId::Cor43 => "cor43",
            InequalityId::Rem44 => "rem44",
            InequalityId::Scalar12 => "scalar12",
            InequalityId::Eq43 => "eq43",
            InequalityId::Eq45 => "eq45",
            InequalityId::Eq46 => "eq46",
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InequalityId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = InequalityId::ALL.iter().map(|i| i.as_str()).collect();
                Error::Usage(format!("unknown inequality '{s}' (known: {})", known.join(", ")))
            })
    }
}

/// Inclusive ranges for the algebra dimension `k`, module rows `m` and tuple length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub k: [usize; 2],
    pub m: [usize; 2],
    pub n: [usize; 2],
}

impl Default for Dims {
    fn default() -> Self {
        Dims {
            k: [1, 4],
            m: [1, 4],
            n: [1, 8],
        }
    }
}

impl Dims {
    pub fn validate(&self) -> Result<()> {
        for (name, [lo, hi]) in [("k", self.k), ("m", self.m), ("n", self.n)] {
            if lo == 0 || lo > hi {
                return Err(Error::Usage(format!(
                    "dimension range {name} = {lo}..={hi} must satisfy 1 <= lo <= hi"
                )));
            }
        }
        Ok(())
    }
}

/// Inputs for one inequality check. Serialized with a `kind` tag and every
/// matrix in the interchange format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Schwarz {
        x: ModuleElement,
        y: ModuleElement,
    },
    Lemma31 {
        x: ModuleElement,
        y: ModuleElement,
        e: ModuleElement,
        a: AlgebraElement,
        b: AlgebraElement,
    },
    Lemma41 {
        xs: ModuleTuple,
        ys: ModuleTuple,
        p: ProbabilityVector,
        alphas: ScalarCoefficients,
        a: ModuleElement,
        b: ModuleElement,
    },
    Thm31 {
        x: ModuleElement,
        y: ModuleElement,
        e: ModuleElement,
        a: AlgebraElement,
        b: AlgebraElement,
        c: AlgebraElement,
        d: AlgebraElement,
    },
    /// Two tuples with centers; `r`, `s` are declared radii when present.
    Pair {
        xs: ModuleTuple,
        ys: ModuleTuple,
        p: ProbabilityVector,
        a: ModuleElement,
        b: ModuleElement,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        r: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s: Option<f64>,
    },
    Rem44 {
        alphas: ScalarCoefficients,
        xs: ModuleTuple,
        p: ProbabilityVector,
        a: ModuleElement,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        r: Option<f64>,
    },
    /// Real scalars `a_i in [lo_a, hi_a]`, `b_i in [lo_b, hi_b]` with uniform weights.
    Scalar12 {
        xs: ModuleTuple,
        ys: ModuleTuple,
        lo_a: f64,
        hi_a: f64,
        lo_b: f64,
        hi_b: f64,
    },
    Alpha {
        alphas: ScalarCoefficients,
        ops: ModuleTuple,
        a: ModuleElement,
        b: ModuleElement,
        p: ProbabilityVector,
    },
    Fourier {
        ops_a: ModuleTuple,
        ops_b: ModuleTuple,
        a: ModuleElement,
        b: ModuleElement,
        params: TransformParams,
    },
    Mellin {
        ops_a: ModuleTuple,
        ops_b: ModuleTuple,
        a: ModuleElement,
        b: ModuleElement,
        m: usize,
    },
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Schwarz { .. } => "schwarz",
            Instance::Lemma31 { .. } => "lemma31",
            Instance::Lemma41 { .. } => "lemma41",
            Instance::Thm31 { .. } => "thm31",
            Instance::Pair { .. } => "pair",
            Instance::Rem44 { .. } => "rem44",
            Instance::Scalar12 { .. } => "scalar12",
            Instance::Alpha { .. } => "alpha",
            Instance::Fourier { .. } => "fourier",
            Instance::Mellin { .. } => "mellin",
        }
    }
}

struct Shape {
    k: usize,
    m: usize,
    n: usize,
}

fn draw_shape(s: &mut Sampler, dims: &Dims) -> Shape {
    Shape {
        k: s.index(dims.k[0], dims.k[1]),
        m: s.index(dims.m[0], dims.m[1]),
        n: s.index(dims.n[0], dims.n[1]),
    }
}

fn constant_tuple(x: &ModuleElement, n: usize) -> ModuleTuple {
    ModuleTuple::new(vec![x.clone(); n]).expect("nonempty")
}

/// Draw an instance satisfying the hypotheses of `id`.
pub fn generate(id: InequalityId, dims: &Dims, cfg: &GenConfig) -> Result<Instance> {
    dims.validate()?;
    let mut s = cfg.sampler();
    let Shape { k, m, n } = draw_shape(&mut s, dims);
    let inst = match id {
        InequalityId::SchwarzModule
        | InequalityId::SchwarzAbs
        | InequalityId::SchwarzFunctional
        | InequalityId::SchwarzRadius
        | InequalityId::SchwarzSeminorm => {
            let x = s.module(m, k);
            let roll = s.uniform(0.0, 1.0);
            let y = if roll < 0.05 {
                ModuleElement::zeros(m, k)
            } else if roll < 0.15 {
                x.clone()
            } else if roll < 0.25 {
                x.act(&s.algebra(k))
            } else {
                s.module(m, k)
            };
            Instance::Schwarz { x, y }
        }
        InequalityId::Lemma31 => {
            let rank = s.index(0, m.min(k));
            let e = s.partial_isometry(m, k, rank)?;
            let x = if s.coin(0.1) { e.clone() } else { s.module(m, k) };
            Instance::Lemma31 {
                x,
                y: s.module(m, k),
                e,
                a: s.algebra(k),
                b: s.algebra(k),
            }
        }
        InequalityId::Lemma41 => Instance::Lemma41 {
            xs: s.tuple(n, m, k),
            ys: s.tuple(n, m, k),
            p: s.probability(n),
            alphas: s.scalars(n),
            a: s.module(m, k),
            b: s.module(m, k),
        },
        InequalityId::Thm31 => {
            let rank = s.index(0, m.min(k));
            let e = s.partial_isometry(m, k, rank)?;
            let (a, b, c, d) = (s.algebra(k), s.algebra(k), s.algebra(k), s.algebra(k));
            let (x, y) = if s.coin(0.5) {
                // inside the midpoint balls, so both Re-conditions hold
                (midpoint_ball(&mut s, &e, &a, &b), midpoint_ball(&mut s, &e, &c, &d))
            } else {
                (s.module(m, k), s.module(m, k))
            };
            Instance::Thm31 { x, y, e, a, b, c, d }
        }
        InequalityId::Thm42 => Instance::Pair {
            xs: s.tuple(n, m, k),
            ys: s.tuple(n, m, k),
            p: s.probability(n),
            a: s.module(m, k),
            b: s.module(m, k),
            r: None,
            s: None,
        },
        InequalityId::Cor43 => {
            let (a, b) = (s.module(m, k), s.module(m, k));
            let (r, rad_s) = (s.uniform(0.05, 2.0), s.uniform(0.05, 2.0));
            Instance::Pair {
                xs: s.ball_tuple(&a, r, n)?,
                ys: s.ball_tuple(&b, rad_s, n)?,
                p: s.probability(n),
                a,
                b,
                r: Some(r),
                s: Some(rad_s),
            }
        }
        InequalityId::Rem44 => {
            let a = s.module(m, k);
            let r = s.uniform(0.05, 2.0);
            Instance::Rem44 {
                alphas: s.scalars(n),
                xs: s.ball_tuple(&a, r, n)?,
                p: s.probability(n),
                a,
                r: Some(r),
            }
        }
        InequalityId::Scalar12 => scalar12_instance(&mut s, n),
        InequalityId::Eq43 => {
            let ops = if s.coin(0.05) {
                constant_tuple(&s.module(k, k), n)
            } else {
                s.tuple(n, k, k)
            };
            Instance::Alpha {
                alphas: s.scalars(n),
                ops,
                a: s.module(k, k),
                b: s.module(k, k),
                p: s.probability(n),
            }
        }
        InequalityId::Eq45 => {
            let params = (0..cfg.retry_limit.max(1))
                .map(|_| {
                    let mm = s.index(1, n);
                    TransformParams::new(s.uniform(0.05, 1.5), mm, n)
                })
                .find(|p| matches!(p, Ok(p) if !p.is_singular(DEFAULT_KERNEL_GUARD)))
                .ok_or_else(|| {
                    Error::Generation(format!(
                        "no nonsingular Fourier kernel after {} draws",
                        cfg.retry_limit
                    ))
                })??;
            let ops_a = if s.coin(0.05) {
                constant_tuple(&s.module(m, k), n)
            } else {
                s.tuple(n, m, k)
            };
            Instance::Fourier {
                ops_a,
                ops_b: s.tuple(n, m, k),
                a: s.module(m, k),
                b: s.module(m, k),
                params,
            }
        }
        InequalityId::Eq46 => {
            let mm = s.index(1, n);
            let ops_a = if s.coin(0.05) {
                constant_tuple(&s.module(m, k), n)
            } else {
                s.tuple(n, m, k)
            };
            Instance::Mellin {
                ops_a,
                ops_b: s.tuple(n, m, k),
                a: s.module(m, k),
                b: s.module(m, k),
                m: mm,
            }
        }
    };
    Ok(inst)
}

/// `x = e (a + b)/2 + C e (a - b)/2` with `|C| < 1`, which keeps
/// `|x - e(a+b)/2|^2 <= |e(a-b)|^2 / 4`.
fn midpoint_ball(
    s: &mut Sampler,
    e: &ModuleElement,
    a: &AlgebraElement,
    b: &AlgebraElement,
) -> ModuleElement {
    let half = Complex64::new(0.5, 0.0);
    let mid = e.act(&(a + b).scale(half));
    let spread = e.act(&(a - b).scale(half));
    let c = s.contraction(e.rows(), 0.99);
    let pushed = ModuleElement::from_matrix(c * spread.matrix()).expect("same shape");
    &mid + &pushed
}

fn scalar12_instance(s: &mut Sampler, n: usize) -> Instance {
    let lo_a = s.uniform(-2.0, 1.0);
    let hi_a = lo_a + s.uniform(0.1, 3.0);
    let lo_b = s.uniform(-2.0, 1.0);
    let hi_b = lo_b + s.uniform(0.1, 3.0);
    let extremal = n.is_multiple_of(2) && s.coin(0.2);
    let mut av = Vec::with_capacity(n);
    let mut bv = Vec::with_capacity(n);
    for i in 0..n {
        if extremal {
            av.push(if i % 2 == 0 { lo_a } else { hi_a });
            bv.push(if i % 2 == 0 { lo_b } else { hi_b });
        } else {
            av.push(s.uniform(lo_a, hi_a));
            bv.push(s.uniform(lo_b, hi_b));
        }
    }
    Instance::Scalar12 {
        xs: real_scalars(&av),
        ys: real_scalars(&bv),
        lo_a,
        hi_a,
        lo_b,
        hi_b,
    }
}

/// Real scalars as a tuple of `1 x 1` module elements.
pub fn real_scalars(v: &[f64]) -> ModuleTuple {
    ModuleTuple::new(
        v.iter()
            .map(|&x| ModuleElement::scalar(Complex64::new(x, 0.0)))
            .collect(),
    )
    .expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip_through_strings() {
        for id in InequalityId::ALL {
            assert_eq!(id.as_str().parse::<InequalityId>().unwrap(), id);
            let json = format!("\"{}\"", id.as_str());
            assert_eq!(serde_json::from_str::<InequalityId>(&json).unwrap(), id);
        }
        assert!(matches!("thm99".parse::<InequalityId>(), Err(Error::Usage(_))));
    }

    #[test]
    fn dims_validation() {
        assert!(Dims::default().validate().is_ok());
        let bad = Dims {
            k: [0, 2],
            ..Dims::default()
        };
        assert!(bad.validate().is_err());
        let bad = Dims {
            n: [3, 2],
            ..Dims::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = GenConfig::with_seed(77);
        for id in InequalityId::ALL {
            let a = generate(id, &Dims::default(), &cfg).unwrap();
            let b = generate(id, &Dims::default(), &cfg).unwrap();
            assert_eq!(a, b, "{id}");
        }
    }

    #[test]
    fn instances_survive_json() {
        let cfg = GenConfig::with_seed(4);
        for id in InequalityId::ALL {
            let inst = generate(id, &Dims::default(), &cfg).unwrap();
            let text = serde_json::to_string(&inst).unwrap();
            let back: Instance = serde_json::from_str(&text).unwrap();
            assert_eq!(back, inst, "{id}");
        }
    }
}
