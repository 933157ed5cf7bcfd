//! Integration of cylinder functions against the uniform web measure:
//! exact enumeration, abelian Fourier selection rules, and Monte Carlo.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{subdivide, CurveFamily};
use crate::group::{Element, Group};
use crate::web::{decompose_family, Decomposition};

use super::kernel::CylinderFunction;
use super::{
    apply_dependence, apply_dependence_idx, gauge_transform, generated_group, sample_uniform,
    AttainableSet, GaugeMap, MeasureError, DEFAULT_ENUMERATION_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// Exhaustive average over the enumerated web measure (finite groups).
    Exact,
    /// Character selection rule (abelian groups, character kernels).
    Fourier,
    /// Mean over uniform samples with a standard-error estimate.
    Mc { samples: u64 },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Fourier => "fourier",
            Method::Mc { .. } => "mc",
        }
    }
}

#[derive(Clone, Debug)]
pub struct IntegrateOptions {
    pub method: Method,
    pub seed: Option<u64>,
    /// Monte-Carlo chunk count; results are deterministic for a fixed seed
    /// and thread count (chunks are reduced in order).
    pub threads: usize,
    /// Subdivision rounds before building the star web (>= 1).
    pub subdivision_rounds: usize,
    pub cap: u64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            method: Method::Exact,
            seed: None,
            threads: 1,
            subdivision_rounds: 1,
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

impl IntegrateOptions {
    pub fn exact() -> Self {
        IntegrateOptions::default()
    }

    pub fn fourier() -> Self {
        IntegrateOptions { method: Method::Fourier, ..Default::default() }
    }

    pub fn mc(samples: u64, seed: u64) -> Self {
        IntegrateOptions {
            method: Method::Mc { samples },
            seed: Some(seed),
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct IntegralReport {
    pub value: Complex64,
    /// Zero for exact and Fourier evaluation; the Monte-Carlo standard
    /// error otherwise.
    pub std_error: f64,
    pub method: &'static str,
    pub seed: Option<u64>,
    pub tassels: usize,
    pub web_curves: usize,
}

/// Decomposes after the requested number of subdivision rounds; curve i of
/// the rewritten family always stands for curve i of the input.
fn decompose_rounds(family: &CurveFamily, rounds: usize) -> Decomposition {
    assert!(rounds >= 1);
    let mut fam = family.clone();
    for _ in 1..rounds {
        let sub = subdivide(&fam.complex, &[&fam]);
        fam = sub.families.into_iter().next().unwrap();
    }
    decompose_family(&fam)
}

/// Integrates a cylinder function against the uniform measure.
pub fn integrate(
    f: &CylinderFunction,
    group: &Group,
    opts: &IntegrateOptions,
) -> Result<IntegralReport, MeasureError> {
    integrate_gauged(f, None, group, opts)
}

/// Integration with an optional gauge applied to the holonomy tuple before
/// kernel evaluation; gauges are keyed by the original complex's vertices.
pub fn integrate_gauged(
    f: &CylinderFunction,
    gauge: Option<&GaugeMap>,
    group: &Group,
    opts: &IntegrateOptions,
) -> Result<IntegralReport, MeasureError> {
    let dec = decompose_rounds(&f.family, opts.subdivision_rounds);
    let report = match opts.method {
        Method::Exact => exact_value(f, gauge, group, opts, &dec)?,
        Method::Fourier => {
            if gauge.is_some() {
                return Err(MeasureError::Unsupported {
                    group: group.to_string(),
                    reason: "gauged integrands are not supported on the Fourier path".into(),
                });
            }
            fourier_value(f, group, &dec)?
        }
        Method::Mc { samples } => mc_value(f, gauge, group, opts, samples, &dec)?,
    };
    Ok(report)
}

fn exact_value(
    f: &CylinderFunction,
    gauge: Option<&GaugeMap>,
    group: &Group,
    opts: &IntegrateOptions,
    dec: &Decomposition,
) -> Result<IntegralReport, MeasureError> {
    if !group.is_finite() {
        return Err(MeasureError::Unsupported {
            group: group.to_string(),
            reason: "exact integration needs a finite group".into(),
        });
    }
    let mut per_tassel: Vec<Vec<Vec<u16>>> = Vec::new();
    let mut space: u128 = 1;
    for t in &dec.web.tassels {
        match generated_group(t, group, opts.cap)? {
            AttainableSet::Finite(s) => {
                space = space.saturating_mul(s.len() as u128);
                if space > u128::from(opts.cap) {
                    return Err(MeasureError::ResourceExceeded { needed: space, cap: opts.cap });
                }
                per_tassel.push(s.into_iter().collect());
            }
            _ => unreachable!("finite backend produces explicit sets"),
        }
    }
    let total = space as u64;
    let rewritten = dec.rewritten_family();

    // Collapse the enumeration to the exact distribution over family
    // tuples first; summing that table in key order makes exact values
    // bit-stable across decompositions and gauge images of the same law.
    let mut table: BTreeMap<Vec<u16>, u64> = BTreeMap::new();
    let mut idx = vec![0usize; per_tassel.len()];
    let web_arity: usize = per_tassel.iter().map(|_| 0usize).count();
    let _ = web_arity;
    loop {
        let mut web_tuple: Vec<u32> = Vec::with_capacity(dec.web.curve_count());
        for (j, set) in per_tassel.iter().enumerate() {
            web_tuple.extend(set[idx[j]].iter().map(|&x| u32::from(x)));
        }
        let fam_tuple = apply_dependence_idx(&dec.map, group, &web_tuple);
        let key: Vec<u16> = if let Some(gm) = gauge {
            let elements: Vec<Element> =
                fam_tuple.iter().map(|&x| Element::Finite(x)).collect();
            let gauged = gauge_transform(gm, group, rewritten, &elements)?;
            gauged
                .into_iter()
                .map(|e| match e {
                    Element::Finite(x) => x as u16,
                    _ => unreachable!("finite backend"),
                })
                .collect()
        } else {
            fam_tuple.into_iter().map(|x| x as u16).collect()
        };
        *table.entry(key).or_insert(0) += 1;

        let mut j = 0;
        loop {
            if j == per_tassel.len() {
                // Evaluate the kernel once per distinct tuple.
                let mut acc = Complex64::new(0.0, 0.0);
                for (tuple, &count) in &table {
                    let elements: Vec<Element> =
                        tuple.iter().map(|&x| Element::Finite(u32::from(x))).collect();
                    let v = f.kernel.eval(group, &elements)?;
                    acc += v * (count as f64 / total as f64);
                }
                return Ok(IntegralReport {
                    value: acc,
                    std_error: 0.0,
                    method: "exact",
                    seed: None,
                    tassels: dec.web.tassels.len(),
                    web_curves: dec.web.curve_count(),
                });
            }
            idx[j] += 1;
            if idx[j] < per_tassel[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

fn fourier_value(
    f: &CylinderFunction,
    group: &Group,
    dec: &Decomposition,
) -> Result<IntegralReport, MeasureError> {
    let modulus: Option<i64> = match group {
        Group::Cyclic(n) => Some(i64::from(*n)),
        Group::Circle => None,
        _ => {
            return Err(MeasureError::Unsupported {
                group: group.to_string(),
                reason: "Fourier integration needs an abelian group".into(),
            })
        }
    };
    let monomials = f.kernel.monomials(f.family.len())?;
    let offsets = dec.web.tassel_offsets();
    let web_arity = dec.web.curve_count();
    let mut acc = Complex64::new(0.0, 0.0);
    for m in &monomials {
        // Push curve exponents through the dependence map.
        let mut wexp = vec![0i64; web_arity];
        for (c, seq) in dec.map.factors.iter().enumerate() {
            let e = m.exps[c];
            if e == 0 {
                continue;
            }
            for s in seq {
                wexp[s.index] += if s.inverted { -e } else { e };
            }
        }
        // The monomial integrates to 1 iff it restricts trivially on every
        // tassel's generated subgroup: each support must sum to zero.
        let mut trivial = true;
        'outer: for (j, t) in dec.web.tassels.iter().enumerate() {
            for support in t.hierarchy.supports() {
                let sum: i64 = support.iter().map(|&i| wexp[offsets[j] + i]).sum();
                let zero = match modulus {
                    Some(n) => sum.rem_euclid(n) == 0,
                    None => sum == 0,
                };
                if !zero {
                    trivial = false;
                    break 'outer;
                }
            }
        }
        if trivial {
            acc += m.coeff;
        }
    }
    Ok(IntegralReport {
        value: acc,
        std_error: 0.0,
        method: "fourier",
        seed: None,
        tassels: dec.web.tassels.len(),
        web_curves: web_arity,
    })
}

fn mc_value(
    f: &CylinderFunction,
    gauge: Option<&GaugeMap>,
    group: &Group,
    opts: &IntegrateOptions,
    samples: u64,
    dec: &Decomposition,
) -> Result<IntegralReport, MeasureError> {
    let seed = opts.seed.ok_or(MeasureError::SeedRequired)?;
    let threads = opts.threads.max(1);
    let rewritten = dec.rewritten_family();

    let chunk_sizes: Vec<u64> = (0..threads as u64)
        .map(|i| samples / threads as u64 + u64::from(i < samples % threads as u64))
        .collect();

    let run_chunk = |chunk: usize, count: u64| -> Result<(Complex64, f64), MeasureError> {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed.wrapping_add((chunk as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        );
        let mut sum = Complex64::new(0.0, 0.0);
        let mut sum_sq = 0.0f64;
        for _ in 0..count {
            let draws = sample_uniform(&dec.web, group, &mut rng)?;
            let mut tuple = apply_dependence(&dec.map, group, &draws)?;
            if let Some(gm) = gauge {
                tuple = gauge_transform(gm, group, rewritten, &tuple)?;
            }
            let v = f.kernel.eval(group, &tuple)?;
            sum += v;
            sum_sq += v.norm_sqr();
        }
        Ok((sum, sum_sq))
    };

    let mut chunk_results: Vec<(Complex64, f64)> = Vec::with_capacity(threads);
    if threads == 1 {
        chunk_results.push(run_chunk(0, chunk_sizes[0])?);
    } else {
        let results: Vec<Result<(Complex64, f64), MeasureError>> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunk_sizes
                .iter()
                .enumerate()
                .map(|(i, &count)| scope.spawn(move || run_chunk(i, count)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("chunk panicked")).collect()
        });
        for r in results {
            chunk_results.push(r?);
        }
    }

    let mut sum = Complex64::new(0.0, 0.0);
    let mut sum_sq = 0.0f64;
    for (s, sq) in chunk_results {
        sum += s;
        sum_sq += sq;
    }
    let n = samples as f64;
    let mean = sum / n;
    let variance = (sum_sq / n - mean.norm_sqr()).max(0.0);
    let std_error = (variance / n).sqrt();
    Ok(IntegralReport {
        value: mean,
        std_error,
        method: "mc",
        seed: Some(seed),
        tassels: dec.web.tassels.len(),
        web_curves: dec.web.curve_count(),
    })
}

#[derive(Clone, Debug)]
pub struct InvarianceReport {
    /// Absolute differences |∫ gauged f - ∫ f| per trial.
    pub diffs: Vec<f64>,
    /// Per-trial acceptance bound: 0 for exact backends, four combined
    /// standard errors for Monte Carlo.
    pub bounds: Vec<f64>,
    pub passed: bool,
}

/// Compares the integral of `f` against integrals of gauge transforms of
/// `f` for `trials` random gauges; exact backends must agree exactly.
pub fn invariance_check(
    f: &CylinderFunction,
    trials: usize,
    group: &Group,
    opts: &IntegrateOptions,
) -> Result<InvarianceReport, MeasureError> {
    if matches!(opts.method, Method::Fourier) {
        return Err(MeasureError::Unsupported {
            group: group.to_string(),
            reason: "invariance checks use the exact or mc method".into(),
        });
    }
    let seed = opts.seed.ok_or(MeasureError::SeedRequired)?;
    let base = integrate(f, group, opts)?;
    let mut gauge_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5DEE_CE66_D152_BD31);
    let complex = &f.family.complex;
    let mut diffs = Vec::with_capacity(trials);
    let mut bounds = Vec::with_capacity(trials);
    let mut passed = true;
    for _ in 0..trials {
        let gauge: GaugeMap = (0..complex.n_vertices())
            .map(|v| (crate::complex::VertexId(v), group.haar_sample(&mut gauge_rng)))
            .collect();
        let gauged = integrate_gauged(f, Some(&gauge), group, opts)?;
        let diff = (gauged.value - base.value).norm();
        let bound = match opts.method {
            Method::Exact => 0.0,
            _ => 4.0 * (base.std_error.powi(2) + gauged.std_error.powi(2)).sqrt(),
        };
        if diff > bound {
            passed = false;
        }
        diffs.push(diff);
        bounds.push(bound);
    }
    Ok(InvarianceReport { diffs, bounds, passed })
}
