use clap::{Args, Subcommand};
use serde::Serialize;
use thintrace::analytic::{
    additive_energy, energy_fit, exp_sum_sl2, exp_sum_sweep, gauss_sum_sr,
    random_primitive_vectors, BumpFunction,
};
use thintrace::arith::factor::is_square_free;
use thintrace::arith::Mat2;
use thintrace::dimension::estimate_dimension;
use thintrace::distribution::{
    build_sequence_an, construct_aleph, error_sum_e1, level_sweep, main_term_decomposition,
    orthogonality_count, AlephSet,
};
use thintrace::geodesics::{
    almost_prime_census, discriminant_set, geodesic_height, pell_trace_search, ClosedGeodesic,
};
use thintrace::local::{format_ratio, local_density};
use thintrace::semigroup::{enumerate_ball, trace_multiplicities, trace_profile, Alphabet};
use thintrace::{Error, Result};

use crate::output::{Cell, Output};

/// Relative slack allowed in `X·Y·Z = N`.
const XYZ_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Every matrix of the norm ball of Γ_A.
    Ball(BallArgs),
    /// Trace multiplicities over the norm ball.
    Traces(BallArgs),
    /// Multiplicity profile M(t) and M(t)/t^(2δ−1) for 2 ≤ t ≤ tMax.
    Figure3(Figure3Args),
    /// Hausdorff dimension of the Cantor set of A.
    Dimension(DimensionArgs),
    /// Local density β(q) as an exact rational.
    Beta(BetaArgs),
    /// Remainder sums over moduli below N^α.
    Level(LevelArgs),
    /// The set ℵ and its equidistribution mod q.
    Aleph(AlephArgs),
    /// The sequence a_N and its main-term decomposition.
    Sequence(SequenceArgs),
    /// The error sum E₁(Q; I).
    E1(E1Args),
    /// Smoothed exponential sums over SL₂(ℤ).
    Expsum(ExpsumArgs),
    /// The normalized quadratic Gauss sum S_r(a; k).
    Gauss(GaussArgs),
    /// Additive energy of the norm ball of SL₂(ℤ).
    Energy(EnergyArgs),
    /// Height of a closed geodesic, from a period or a matrix.
    Geodesic(GeodesicArgs),
    /// Square-free parts of t² − 4 over the traces of the ball.
    Discriminants(DiscriminantArgs),
    /// Traces solving t² − Δs² = 4.
    Pell(PellArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ball(_) => "ball",
            Command::Traces(_) => "traces",
            Command::Figure3(_) => "figure3",
            Command::Dimension(_) => "dimension",
            Command::Beta(_) => "beta",
            Command::Level(_) => "level",
            Command::Aleph(_) => "aleph",
            Command::Sequence(_) => "sequence",
            Command::E1(_) => "e1",
            Command::Expsum(_) => "expsum",
            Command::Gauss(_) => "gauss",
            Command::Energy(_) => "energy",
            Command::Geodesic(_) => "geodesic",
            Command::Discriminants(_) => "discriminants",
            Command::Pell(_) => "pell",
        }
    }

    pub fn run(&self, seed: u64) -> Result<Output> {
        match self {
            Command::Ball(a) => ball(a),
            Command::Traces(a) => traces(a),
            Command::Figure3(a) => figure3(a),
            Command::Dimension(a) => dimension(a),
            Command::Beta(a) => beta(a),
            Command::Level(a) => level(a),
            Command::Aleph(a) => aleph(a),
            Command::Sequence(a) => sequence(a),
            Command::E1(a) => e1(a),
            Command::Expsum(a) => expsum(a, seed),
            Command::Gauss(a) => gauss(a),
            Command::Energy(a) => energy(a),
            Command::Geodesic(a) => geodesic(a),
            Command::Discriminants(a) => discriminants(a),
            Command::Pell(a) => pell(a),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn parse_alphabet(s: &str) -> std::result::Result<Alphabet, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_list<T: std::str::FromStr>(s: &str) -> std::result::Result<Vec<T>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<T>()
                .map_err(|_| format!("cannot parse {t:?}"))
        })
        .collect()
}

fn parse_ints(s: &str) -> std::result::Result<Vec<i64>, String> {
    parse_list(s)
}

fn parse_floats(s: &str) -> std::result::Result<Vec<f64>, String> {
    parse_list(s)
}

fn parse_matrix(s: &str) -> std::result::Result<[i64; 4], String> {
    let v = parse_ints(s)?;
    v.try_into()
        .map_err(|_| format!("expected four entries a,b,c,d in {s:?}"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Grid(pub Vec<f64>);

/// `start:stop:step` (inclusive) or a comma-separated list.
fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    grid_values(s).map(Grid)
}

fn grid_values(s: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 1 {
        return parse_floats(s);
    }
    let [start, stop, step] = parts[..] else {
        return Err(format!("grid {s:?} is not start:stop:step"));
    };
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("cannot parse {t:?}"))
    };
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if !(step > 0.0 && stop >= start) {
        return Err(format!("grid {s:?} needs step > 0 and stop ≥ start"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

fn matrix_text(m: &Mat2<i64>) -> String {
    format!("{},{},{},{}", m.a, m.b, m.c, m.d)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BallArgs {
    #[arg(long, value_parser = parse_alphabet)]
    pub alphabet: Alphabet,
    /// Strict norm bound N.
    #[arg(long)]
    pub bound: f64,
}

fn ball(a: &BallArgs) -> Result<Output> {
    let mut elems = enumerate_ball(&a.alphabet, a.bound)?;
    elems.sort();
    let mut out = Output::table(
        "elements of the norm ball of Γ_A",
        vec!["a", "b", "c", "d", "trace"],
    );
    for m in &elems {
        out.push(vec![
            m.a.into(),
            m.b.into(),
            m.c.into(),
            m.d.into(),
            m.trace().into(),
        ]);
    }
    Ok(out.note("size", elems.len()))
}

fn traces(a: &BallArgs) -> Result<Output> {
    let stats = trace_multiplicities(&a.alphabet, a.bound)?;
    let mut out = Output::table(
        "trace multiplicity M_A(t) over the norm ball",
        vec!["t", "multiplicity"],
    );
    for (&t, &m) in &stats.multiplicities {
        out.push(vec![t.into(), m.into()]);
    }
    Ok(out.note("total", stats.total))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Figure3Args {
    #[arg(long, value_parser = parse_alphabet, default_value = "1-10")]
    pub alphabet: Alphabet,
    #[arg(long = "tmax", default_value_t = 1000)]
    pub t_max: u64,
    /// Collocation order for δ_A.
    #[arg(long, default_value_t = 32)]
    pub order: usize,
}

fn figure3(a: &Figure3Args) -> Result<Output> {
    let delta = estimate_dimension(&a.alphabet, a.order, 1e-10)?.delta;
    let rows = trace_profile(&a.alphabet, a.t_max, delta)?;
    let mut out = Output::table(
        "multiplicity M_A(t) and M_A(t)/t^(2δ−1)",
        vec!["t", "multiplicity", "ratio"],
    );
    for r in rows {
        out.push(vec![r.t.into(), r.multiplicity.into(), r.ratio.into()]);
    }
    Ok(out
        .note("delta", delta)
        .note("norm_bound", 3.0 * a.t_max as f64))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DimensionArgs {
    #[arg(long, value_parser = parse_alphabet)]
    pub alphabet: Alphabet,
    #[arg(long, default_value_t = 32)]
    pub order: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

fn dimension(a: &DimensionArgs) -> Result<Output> {
    let d = estimate_dimension(&a.alphabet, a.order, a.tol)?;
    Ok(Output::record(
        "Hausdorff dimension δ_A: root of λ(s) = 1 for the transfer operator",
        vec![
            ("delta", d.delta.into()),
            ("order", d.order.into()),
            ("tol", d.tol.into()),
            ("residual", d.residual.into()),
            ("delta_doubled", d.delta_doubled.into()),
            ("stable", d.stable.into()),
            ("degenerate", d.degenerate.into()),
        ],
    ))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BetaArgs {
    /// Square-free modulus.
    #[arg(long)]
    pub q: u64,
}

fn beta(a: &BetaArgs) -> Result<Output> {
    let d = local_density(a.q)?;
    let join = |v: Vec<String>| v.join(";");
    Ok(Output::record(
        "local density β(q) = ∏ (p + χ₄(p))/(p² − 1)",
        vec![
            ("q", d.q.into()),
            ("beta", Cell::Exact(format_ratio(&d.beta))),
            (
                "primes",
                join(d.primes.iter().map(u64::to_string).collect()).into(),
            ),
            ("rho", join(d.rho.iter().map(format_ratio).collect()).into()),
        ],
    ))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LevelArgs {
    #[arg(long, value_parser = parse_alphabet)]
    pub alphabet: Alphabet,
    #[arg(long)]
    pub bound: f64,
    /// Exponents α as `start:stop:step` or a list.
    #[arg(long, value_parser = parse_grid, default_value = "0.05:0.5:0.05")]
    pub alpha: Grid,
}

fn level(a: &LevelArgs) -> Result<Output> {
    let rep = level_sweep(&a.alphabet, a.bound, &a.alpha.0)?;
    let mut out = Output::table(
        "remainder ratio Σ_{q<N^α} |r_q| / total",
        vec!["alpha", "Q", "sum_abs_r", "total", "ratio", "ratio_beta"],
    );
    for r in &rep.rows {
        out.push(vec![
            r.alpha.into(),
            r.q_bound.into(),
            r.sum_abs_r.into(),
            r.total.into(),
            r.ratio.into(),
            r.ratio_beta.into(),
        ]);
    }
    Ok(out)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AlephArgs {
    /// Norm scale Y.
    #[arg(long = "Y", alias = "y")]
    pub y: f64,
    /// Square-free modulus B.
    #[arg(long = "B", alias = "b", default_value_t = 2)]
    pub b: u64,
    /// Moduli for the discrepancy table.
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    pub q: Vec<u64>,
}

fn aleph(a: &AlephArgs) -> Result<Output> {
    let set = construct_aleph(a.y, a.b)?;
    let mut out = Output::table("discrepancy of ℵ mod q", vec!["q", "discrepancy"]);
    for &q in &a.q {
        out.push(vec![q.into(), set.discrepancy(q)?.into()]);
    }
    Ok(out
        .note("size", set.len())
        .note("group_order", set.group_order)
        .note("T", set.t)
        .note("s_T", matrix_text(&set.s_t))
        .note("S_size", set.s_size)
        .note("S_prime_size", set.s_prime_size))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SequenceArgs {
    #[arg(long, value_parser = parse_alphabet)]
    pub alphabet: Alphabet,
    /// Target N; must equal X·Y·Z.
    #[arg(long = "N", alias = "n")]
    pub n: f64,
    #[arg(long = "X", alias = "x")]
    pub x: f64,
    #[arg(long = "Y", alias = "y")]
    pub y: f64,
    #[arg(long = "Z", alias = "z")]
    pub z: f64,
    #[arg(long = "B", alias = "b", default_value_t = 2)]
    pub b: u64,
    /// Square-free moduli 𝔮 (default: all square-free 𝔮 ≤ 30).
    #[arg(long, value_delimiter = ',')]
    pub q: Option<Vec<u64>>,
    /// Use ℵ = {I} in place of the pigeonhole construction.
    #[arg(long = "aleph-identity")]
    pub aleph_identity: bool,
    /// Divisor cut-off Q₀ of the main term.
    #[arg(long = "Q0", alias = "q0", default_value_t = f64::INFINITY)]
    pub q0: f64,
}

fn sequence(a: &SequenceArgs) -> Result<Output> {
    let xyz = a.x * a.y * a.z;
    if !((xyz - a.n).abs() <= XYZ_TOLERANCE * a.n.abs()) {
        return Err(invalid(format!("X·Y·Z = {xyz} differs from N = {}", a.n)));
    }
    let set = if a.aleph_identity {
        AlephSet::identity()
    } else {
        construct_aleph(a.y, a.b)?
    };
    let seq = build_sequence_an(&a.alphabet, a.x, a.z, &set)?;
    let qs =
        a.q.clone()
            .unwrap_or_else(|| (1..=30).filter(|&q| is_square_free(q)).collect());
    let mut out = Output::table(
        "|A_q| by filtering, by characters, and its main term",
        vec![
            "q",
            "filtered",
            "orthogonality_re",
            "orthogonality_im",
            "main",
            "main_exact_numerator",
            "remainder",
        ],
    );
    for q in qs {
        let v = orthogonality_count(&seq, q)?;
        let t = main_term_decomposition(&seq, q, a.q0)?;
        out.push(vec![
            q.into(),
            t.filtered.into(),
            v.re.into(),
            v.im.into(),
            t.main.into(),
            t.main_exact_numerator.into(),
            t.remainder.into(),
        ]);
    }
    Ok(out
        .note("total", seq.total)
        .note("xi", seq.xi.len())
        .note("aleph", seq.aleph.len())
        .note("omega", seq.omega.len()))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct E1Args {
    #[arg(long, value_parser = parse_alphabet)]
    pub alphabet: Alphabet,
    /// Dyadic scale: moduli run over square-free q in [Q, 2Q).
    #[arg(long = "Q")]
    pub big_q: f64,
    #[arg(long = "X", alias = "x")]
    pub x: f64,
    #[arg(long = "Z", alias = "z")]
    pub z: f64,
}

fn e1(a: &E1Args) -> Result<Output> {
    let r = error_sum_e1(&a.alphabet, a.big_q, &Mat2::identity(), a.x, a.z)?;
    Ok(Output::record(
        "error sum E₁(Q; I) over square-free q in [Q, 2Q)",
        vec![
            ("Q", r.q.into()),
            ("X", r.x.into()),
            ("Z", r.z.into()),
            ("moduli", r.moduli.len().into()),
            ("xi", r.xi_size.into()),
            ("omega", r.omega_size.into()),
            ("e1", r.e1.into()),
            ("value", r.value.into()),
            ("bound_unconditional", r.bound5.into()),
            ("bound_energy", r.bound6.into()),
            ("ratio_unconditional", r.ratio5.into()),
            ("ratio_energy", r.ratio6.into()),
        ],
    ))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExpsumArgs {
    /// Scale X of the bump φ_X.
    #[arg(long)]
    pub bound: f64,
    /// Moduli q.
    #[arg(long, value_delimiter = ',', conflicts_with = "q_max")]
    pub q: Option<Vec<u64>>,
    /// Every square-free q up to this value.
    #[arg(long = "q-max")]
    pub q_max: Option<u64>,
    /// One primitive vector a,b,c,d.
    #[arg(long, value_parser = parse_matrix, conflicts_with = "random")]
    pub s: Option<[i64; 4]>,
    /// Number of seeded random primitive vectors.
    #[arg(long)]
    pub random: Option<usize>,
}

fn expsum(a: &ExpsumArgs, seed: u64) -> Result<Output> {
    let qs = match (&a.q, a.q_max) {
        (Some(q), _) => q.clone(),
        (None, Some(m)) => (1..=m).filter(|&q| is_square_free(q)).collect(),
        (None, None) => return Err(invalid("give --q or --q-max")),
    };
    let ss = match (a.s, a.random) {
        (Some(s), _) => vec![s],
        (None, Some(n)) => random_primitive_vectors(n, seed),
        (None, None) => return Err(invalid("give --s or --random")),
    };
    let phi = BumpFunction::default();
    let results = if qs.len() * ss.len() == 1 {
        vec![exp_sum_sl2(a.bound, qs[0], ss[0], &phi)?]
    } else {
        exp_sum_sweep(a.bound, &qs, &ss, &phi)?
    };
    let mut out = Output::table(
        "Σ φ_X(ξ) e_q(⟨s, ξ⟩) over SL₂(ℤ) against q^(−3/2)X² + X^(3/2) + qX",
        vec!["X", "q", "s", "re", "im", "abs", "bound", "ratio"],
    );
    for r in results {
        out.push(vec![
            r.x.into(),
            r.q.into(),
            format!("{},{},{},{}", r.s[0], r.s[1], r.s[2], r.s[3]).into(),
            r.re.into(),
            r.im.into(),
            r.abs.into(),
            r.bound.into(),
            r.ratio.into(),
        ]);
    }
    Ok(out
        .note("bump_width", phi.width)
        .note("bump_plateau", phi.plateau))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GaussArgs {
    #[arg(long)]
    pub r: u64,
    #[arg(long)]
    pub a: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub k: i64,
}

fn gauss(a: &GaussArgs) -> Result<Output> {
    let s = gauss_sum_sr(a.r, a.a, a.k)?;
    Ok(Output::record(
        "S_r(a; k) = r⁻¹ Σ_{x mod r} e_r(ax² + kx)",
        vec![
            ("r", a.r.into()),
            ("a", a.a.into()),
            ("k", a.k.into()),
            ("re", s.re.into()),
            ("im", s.im.into()),
            ("abs", s.norm().into()),
        ],
    ))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnergyArgs {
    /// A single scale X.
    #[arg(long, conflicts_with = "grid")]
    pub bound: Option<f64>,
    /// Several scales, fitted on a log-log scale.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
}

fn energy(a: &EnergyArgs) -> Result<Output> {
    let (reports, fit) = match (&a.grid, a.bound) {
        (Some(xs), _) if xs.len() >= 2 => {
            let f = energy_fit(xs)?;
            (f.reports, Some(f.exponent))
        }
        (Some(xs), _) => (
            xs.iter()
                .map(|&x| additive_energy(x))
                .collect::<Result<Vec<_>>>()?,
            None,
        ),
        (None, Some(x)) => (vec![additive_energy(x)?], None),
        (None, None) => return Err(invalid("give --bound or --grid")),
    };
    let mut out = Output::table(
        "additive energy #{γ₁ + γ₂ = γ₃ + γ₄} of the norm ball of SL₂(ℤ)",
        vec![
            "X",
            "ball",
            "E",
            "diffE",
            "distinct_differences",
            "max_offdiagonal",
            "fit",
        ],
    );
    for r in reports {
        out.push(vec![
            r.x.into(),
            r.ball.into(),
            r.energy.into(),
            r.diff_energy.into(),
            r.distinct_differences.into(),
            r.max_offdiagonal.into(),
            fit.map_or(Cell::Empty, Cell::from),
        ]);
    }
    Ok(out)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GeodesicArgs {
    /// Period of a purely periodic continued fraction.
    #[arg(long, value_delimiter = ',', conflicts_with = "matrix")]
    pub period: Option<Vec<i64>>,
    /// A hyperbolic matrix a,b,c,d of SL₂(ℤ).
    #[arg(long, value_parser = parse_matrix, allow_hyphen_values = true)]
    pub matrix: Option<[i64; 4]>,
}

fn geodesic(a: &GeodesicArgs) -> Result<Output> {
    const QUANTITY: &str = "height max_i (α_i + β_i)/2 of the reduced closed geodesic";
    let join = |p: &[i64]| p.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    match (&a.period, a.matrix) {
        (Some(p), _) => {
            let h = geodesic_height(p)?;
            Ok(Output::record(
                QUANTITY,
                vec![("period", join(p).into()), ("height", h.into())],
            ))
        }
        (None, Some([ma, mb, mc, md])) => {
            let g = ClosedGeodesic::new(Mat2::new(ma, mb, mc, md).to_big())?;
            Ok(Output::record(
                QUANTITY,
                vec![
                    ("trace", Cell::Exact(g.trace.to_string())),
                    ("discriminant", Cell::Exact(g.discriminant.to_string())),
                    ("sqf", g.sqf.into()),
                    ("square_root", g.square_root.into()),
                    (
                        "fundamental_discriminant",
                        g.fundamental_discriminant.into(),
                    ),
                    ("fixed_point", Cell::Exact(g.fixed_point.to_string())),
                    ("preperiod", join(g.expansion.preperiod()).into()),
                    ("period", join(g.expansion.period()).into()),
                    ("height", g.height.into()),
                ],
            ))
        }
        (None, None) => Err(invalid("give --period or --matrix")),
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DiscriminantArgs {
    #[arg(long, value_parser = parse_alphabet)]
    pub alphabet: Alphabet,
    #[arg(long)]
    pub bound: f64,
    /// R for the census of traces with at most R prime factors.
    #[arg(long = "almost-prime", default_value_t = 2)]
    pub almost_prime: u32,
}

fn discriminants(a: &DiscriminantArgs) -> Result<Output> {
    let set = discriminant_set(&a.alphabet, a.bound)?;
    let traces: Vec<u64> = set.entries.iter().map(|e| e.t).collect();
    let census = almost_prime_census(&traces, a.almost_prime)?;
    let mut out = Output::table(
        "square-free part of t² − 4 over traces t > 2",
        vec!["t", "D", "sqf", "fundamental", "omega", "almost_prime"],
    );
    for e in &set.entries {
        out.push(vec![
            e.t.into(),
            e.d.into(),
            e.sqf.into(),
            e.fundamental.into(),
            (e.omega as u64).into(),
            (e.omega <= a.almost_prime).into(),
        ]);
    }
    Ok(out
        .note("distinct_sqf", set.multiplicity.len())
        .note("almost_prime_count", census.count)
        .note("almost_prime_ratio", census.ratio)
        .note("skipped_parabolic", set.skipped_parabolic))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PellArgs {
    #[arg(long, value_parser = parse_alphabet)]
    pub alphabet: Alphabet,
    /// Non-square Δ.
    #[arg(long)]
    pub delta: u64,
    #[arg(long)]
    pub bound: f64,
}

fn pell(a: &PellArgs) -> Result<Output> {
    let hits = pell_trace_search(&a.alphabet, a.delta, a.bound)?;
    let mut out = Output::table(
        "traces t of the ball with t² − Δs² = 4, s ≥ 1",
        vec!["t", "s", "multiplicity", "witness"],
    );
    for h in hits {
        out.push(vec![
            h.t.into(),
            h.s.into(),
            h.multiplicity.into(),
            h.witnesses
                .first()
                .map_or(Cell::Empty, |m| matrix_text(m).into()),
        ]);
    }
    Ok(out)
}
