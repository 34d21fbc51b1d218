//! Globally adaptive 21-point Gauss–Kronrod quadrature for vector-valued
//! integrands, with an optional semi-infinite tail handled through
//! `ω = M / t`.

use crate::error::{Error, Result};

// Published node and weight tables, kept at full printed precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_460,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_958_109_831,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

/// Gauss weights for the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    /// Maximum number of subintervals.
    pub limit: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integral<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Map {
    Linear,
    /// `t ∈ (0, 1]`, `ω = scale / t`.
    Inverted {
        scale: f64,
    },
}

#[derive(Debug, Clone, Copy)]
struct Piece<const N: usize> {
    a: f64,
    b: f64,
    map: Map,
    value: [f64; N],
    error: [f64; N],
}

fn rule<const N: usize, F: Fn(f64) -> [f64; N]>(f: &F, a: f64, b: f64, map: Map) -> Piece<N> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |t: f64| -> [f64; N] {
        match map {
            Map::Linear => f(t),
            Map::Inverted { scale } => {
                let jac = scale / (t * t);
                let mut v = f(scale / t);
                v.iter_mut().for_each(|x| *x *= jac);
                v
            }
        }
    };

    let fc = eval(centre);
    let mut kronrod = [0.0; N];
    let mut gauss = [0.0; N];
    let mut abs_sum = [0.0; N];
    let mut samples = [[0.0; N]; 21];
    samples[10] = fc;
    for i in 0..N {
        kronrod[i] = WGK[10] * fc[i];
        abs_sum[i] = WGK[10] * fc[i].abs();
    }
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(centre - dx);
        let f2 = eval(centre + dx);
        samples[j] = f1;
        samples[20 - j] = f2;
        for i in 0..N {
            kronrod[i] += WGK[j] * (f1[i] + f2[i]);
            abs_sum[i] += WGK[j] * (f1[i].abs() + f2[i].abs());
            if j % 2 == 1 {
                gauss[i] += WG[j / 2] * (f1[i] + f2[i]);
            }
        }
    }

    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for i in 0..N {
        let mean = 0.5 * kronrod[i];
        let asc: f64 = (0..21)
            .map(|j| {
                let w = if j == 10 { WGK[10] } else { WGK[j.min(20 - j)] };
                w * (samples[j][i] - mean).abs()
            })
            .sum::<f64>()
            * half.abs();
        let raw = ((kronrod[i] - gauss[i]) * half).abs();
        let mut err = raw;
        if asc != 0.0 && raw != 0.0 {
            err = asc * (200.0 * raw / asc).powf(1.5).min(1.0);
        }
        let resabs = abs_sum[i] * half.abs();
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * resabs);
        }
        value[i] = kronrod[i] * half;
        error[i] = err;
    }
    Piece {
        a,
        b,
        map,
        value,
        error,
    }
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, plus `[breaks[last], ∞)`
/// when `tail` is set. Breakpoints must be increasing; they seed the initial
/// partition.
pub fn integrate<const N: usize, F: Fn(f64) -> [f64; N]>(
    f: F,
    breaks: &[f64],
    tail: bool,
    tol: &Tolerance,
) -> Result<Integral<N>> {
    let mut pieces: Vec<Piece<N>> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| rule(&f, w[0], w[1], Map::Linear))
        .collect();
    if tail {
        let scale = *breaks.last().expect("at least one breakpoint");
        pieces.push(rule(&f, 0.0, 1.0, Map::Inverted { scale }));
    }

    loop {
        let mut value = [0.0; N];
        let mut error = [0.0; N];
        for p in &pieces {
            for i in 0..N {
                value[i] += p.value[i];
                error[i] += p.error[i];
            }
        }
        let target: [f64; N] = std::array::from_fn(|i| tol.abs.max(tol.rel * value[i].abs()));
        if (0..N).all(|i| error[i] <= target[i]) {
            return Ok(Integral {
                value,
                error,
                intervals: pieces.len(),
            });
        }

        let score =
            |p: &Piece<N>| -> f64 { (0..N).map(|i| p.error[i] / target[i]).fold(0.0, f64::max) };
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .map(|(k, p)| (k, score(p)))
            .fold((0, f64::MIN), |acc, x| if x.1 > acc.1 { x } else { acc });
        let p = pieces[worst];
        let mid = 0.5 * (p.a + p.b);
        if pieces.len() >= tol.limit || !(mid > p.a && mid < p.b) {
            let (lo, hi) = match p.map {
                Map::Linear => (p.a, p.b),
                Map::Inverted { scale } => (
                    scale / p.b,
                    if p.a > 0.0 {
                        scale / p.a
                    } else {
                        f64::INFINITY
                    },
                ),
            };
            let worst_err = (0..N).map(|i| p.error[i]).fold(0.0, f64::max);
            return Err(Error::Quadrature {
                error: worst_err,
                lo,
                hi,
            });
        }
        pieces[worst] = rule(&f, p.a, mid, p.map);
        pieces.push(rule(&f, mid, p.b, p.map));
    }
}
