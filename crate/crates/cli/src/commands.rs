//! The experiment subcommands.

use std::collections::BTreeMap;

use anyhow::{bail, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use starlab::extension::axioms::{axiom_shard, AxiomReport};
use starlab::extension::orbit::orbit_explore;
use starlab::random::{random_point, random_set, random_set_bounded};
use starlab::{
    search_extensions, transfer_check, verify_candidate, Axiom, AxiomSet, Context, Coordinate,
    EpSet, EqpFunction, Equality, FiniteStone, FiniteUniverse, HVerdict, HyperNat,
    IndiscernibilityReport, Possibility, Rep2Set, Separability, Signature, StarMapCandidate,
    UltrafilterHandle,
};

use crate::config::{split_list, Params};
use crate::report::{Outcome, Status};

pub const NAMES: &[&str] = &[
    "axioms",
    "hausdorff",
    "indiscernibles",
    "tensor",
    "possibility",
    "transfer",
    "orbit",
    "finite-search",
    "stone",
];

pub fn run(name: &str, p: &Params) -> Result<Outcome> {
    match name {
        "axioms" => axioms(p),
        "hausdorff" => hausdorff(p),
        "indiscernibles" => indiscernibles(p),
        "tensor" => tensor(p),
        "possibility" => possibility(p),
        "transfer" => transfer(p),
        "orbit" => orbit(p),
        "finite-search" => finite_search(p),
        "stone" => stone(p),
        other => bail!("unknown subcommand `{other}`"),
    }
}

fn context(p: &Params) -> Result<Context> {
    Ok(Context::new(p.oracle()?)
        .with_horizon(p.horizon()?)
        .with_seed(p.seed()?))
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn axioms(p: &Params) -> Result<Outcome> {
    let samples: u64 = p.parsed("samples", "1000")?;
    let ctx = context(p)?.with_samples(samples as usize);
    // Lazy oracles commit residues in query order, so they run as one shard.
    let shards = if !is_lazy(&ctx.ambient) {
        std::thread::available_parallelism()
            .map_or(1, |n| n.get())
            .min(8) as u64
    } else {
        1
    };
    let per = samples.div_ceil(shards.max(1));
    let report = std::thread::scope(|s| {
        let handles: Vec<_> = (0..shards)
            .map(|i| {
                let ctx = &ctx;
                let start = (i * per).min(samples);
                let count = per.min(samples - start);
                s.spawn(move || axiom_shard(ctx, start, count))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("shard panicked"))
            .fold(AxiomReport::default(), AxiomReport::merge)
    });
    let status = if report.passed() {
        Status::Pass
    } else {
        Status::Fail
    };
    let summary = format!(
        "{} samples: comp {}/{}, equ {}/{}, dir {}/{}",
        report.samples,
        report.comp.passed,
        report.samples,
        report.equ.passed,
        report.samples,
        report.dir.passed,
        report.samples
    );
    Ok(Outcome {
        status,
        summary,
        results: to_json(&report),
        log: ctx.ambient.log(),
    })
}

fn is_lazy(u: &UltrafilterHandle) -> bool {
    matches!(u.oracle(), Some(starlab::ResidueOracle::Lazy { .. }))
}

fn hausdorff(p: &Params) -> Result<Outcome> {
    let ctx = context(p)?;
    let f: EqpFunction = p.parsed("f", "n")?;
    let g: EqpFunction = p.parsed("g", "n^2")?;
    let report = ctx.ambient.hausdorff_check(&f, &g, ctx.horizon);
    let (pf, pg) = (ctx.ambient.pushforward(&f), ctx.ambient.pushforward(&g));
    let revalidated = match &report.pushforwards {
        Equality::Distinct { witness } => pf.member(witness) && !pg.member(witness),
        _ => true,
    };
    let status = match report.verdict {
        HVerdict::InternalInconsistency => Status::Fail,
        HVerdict::Inconclusive => Status::Inconclusive,
        _ if !revalidated => Status::Fail,
        _ => Status::Pass,
    };
    Ok(Outcome {
        status,
        summary: format!("(H) for f = {f}, g = {g}: {:?}", report.verdict),
        results: json!({
            "f": f,
            "g": g,
            "pushforwardF": pf,
            "pushforwardG": pg,
            "report": report,
            "witnessRevalidated": revalidated,
        }),
        log: ctx.ambient.log(),
    })
}

fn separability_kind(s: &Separability) -> (&'static str, String) {
    match s {
        Separability::SeparatedBy { witness } => ("SeparatedBy", witness.to_string()),
        Separability::IndiscernibleCertified { certificate } => (
            "IndiscernibleCertified",
            serde_json::to_string(certificate).expect("serializes"),
        ),
        Separability::UnknownUpTo { horizon } => ("UnknownUpTo", horizon.to_string()),
        Separability::SamePoint => ("SamePoint", String::new()),
    }
}

/// Re-checks the claim of a monad comparison from scratch.
fn revalidate_pair(ctx: &Context, r: &IndiscernibilityReport) -> bool {
    match &r.separable {
        Separability::SeparatedBy { witness } => {
            ctx.star_member(&r.xi, witness) && !ctx.star_member(&r.eta, witness)
        }
        Separability::IndiscernibleCertified { .. } => {
            !ctx.hyper_equal(&r.xi, &r.eta)
                && ctx
                    .u_point(&r.xi)
                    .equal(&ctx.u_point(&r.eta), ctx.horizon)
                    .is_certified()
        }
        Separability::SamePoint => ctx.hyper_equal(&r.xi, &r.eta),
        Separability::UnknownUpTo { .. } => true,
    }
}

fn pair_status(r: &IndiscernibilityReport, ok: bool) -> Status {
    if !ok || r.hausdorff.verdict == HVerdict::InternalInconsistency {
        Status::Fail
    } else if matches!(r.separable, Separability::UnknownUpTo { .. }) {
        Status::Inconclusive
    } else {
        Status::Pass
    }
}

fn indiscernibles(p: &Params) -> Result<Outcome> {
    let ctx = context(p)?;
    let xi = HyperNat::new(p.parsed("xi", "n")?);
    let eta = HyperNat::new(p.parsed("eta", "n^2")?);
    let pairs: u64 = p.parsed("pairs", "100")?;

    let flagship = ctx.monad_compare(&xi, &eta);
    let flagship_ok = revalidate_pair(&ctx, &flagship);
    let mut status = pair_status(&flagship, flagship_ok);

    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut rows = Vec::new();
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for _ in 0..pairs {
        let (a, b) = (random_point(&mut rng), random_point(&mut rng));
        let r = ctx.monad_compare(&a, &b);
        let ok = revalidate_pair(&ctx, &r);
        status = status.and(pair_status(&r, ok));
        let (kind, detail) = separability_kind(&r.separable);
        *counts.entry(kind).or_default() += 1;
        rows.push(json!({
            "xi": r.xi,
            "eta": r.eta,
            "separability": kind,
            "detail": detail,
            "hausdorff": r.hausdorff.verdict,
            "revalidated": ok,
        }));
    }
    let (kind, _) = separability_kind(&flagship.separable);
    Ok(Outcome {
        status,
        summary: format!("flagship ({xi}, {eta}): {kind}; random pairs: {counts:?}"),
        results: json!({
            "flagship": flagship,
            "flagshipRevalidated": flagship_ok,
            "counts": counts,
            "pairs": rows,
        }),
        log: ctx.ambient.log(),
    })
}

fn tensor(p: &Params) -> Result<Outcome> {
    let ctx = context(p)?;
    let u = ctx.ambient.clone();
    let max_modulus: u64 = p.parsed("probe-modulus", "50")?;
    let max_prefix: u64 = p.parsed("probe-prefix", "50")?;
    let random_probes: u64 = p.parsed("random-probes", "200")?;
    let t = u.tensor(&u);

    let diagonal_inner = t.inner_set(&Rep2Set::Diagonal);
    let diagonal_in = t.member(&Rep2Set::Diagonal);
    let expected_in = u.is_principal();

    // An ultrafilter is determined by the singletons below the prefix bound
    // and the residue classes up to the modulus bound; random sets on top.
    let mut probes: Vec<EpSet> = (0..max_prefix).map(EpSet::singleton).collect();
    for m in 1..=max_modulus {
        probes.extend((0..m).map(|r| EpSet::periodic(m, [r])));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    probes
        .extend((0..random_probes).map(|_| random_set_bounded(&mut rng, max_prefix, max_modulus)));
    let projections = [
        t.projection(Coordinate::First),
        t.projection(Coordinate::Second),
    ];
    let mut disagreements = Vec::new();
    for a in &probes {
        let want = u.member(a);
        for (i, pr) in projections.iter().enumerate() {
            if pr.member(a) != want {
                disagreements.push(json!({"set": a, "projection": i + 1, "inU": want}));
            }
        }
    }
    let projections_agree = disagreements.is_empty();
    let status = if diagonal_in == expected_in && projections_agree {
        Status::Pass
    } else {
        Status::Fail
    };
    let h_violated = !diagonal_in && projections_agree;
    Ok(Outcome {
        status,
        summary: format!(
            "diagonal {} U⊗U; projections agree with U on {} probes: {}",
            if diagonal_in { "∈" } else { "∉" },
            probes.len(),
            projections_agree
        ),
        results: json!({
            "ultrafilter": u,
            "diagonalInnerSet": diagonal_inner,
            "diagonalInTensor": diagonal_in,
            "expectedDiagonalInTensor": expected_in,
            "probes": probes.len(),
            "projectionsAgree": projections_agree,
            "disagreements": disagreements,
            "tensorViolatesH": h_violated,
        }),
        log: ctx.ambient.log(),
    })
}

/// Points below which NoFIP verdicts are cross-checked by enumeration.
const POSS_WINDOW: u64 = 4096;

fn possibility(p: &Params) -> Result<Outcome> {
    let ctx = context(p)?;
    let given = p.sets("sets", "evens; mult 3; from 10")?;
    let random: u64 = p.parsed("random", "0")?;
    let mut families = vec![given];
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    for _ in 0..random {
        let n = rng.gen_range(1..=10);
        families.push((0..n).map(|_| random_set(&mut rng)).collect());
    }
    let mut status = Status::Pass;
    let mut rows = Vec::new();
    for family in &families {
        let verdict = ctx.poss_witness(family);
        let ok = match &verdict {
            Possibility::NoFip { chain } => {
                chain.last().is_some_and(|s| s.is_empty())
                    && (0..POSS_WINDOW).all(|n| !family.iter().all(|a| a.contains_u64(n)))
            }
            Possibility::StandardWitness { point, memberships } => {
                memberships.iter().all(|&m| m) && family.iter().all(|a| a.contains_u64(*point))
            }
            Possibility::HyperWitness { point, memberships } => {
                memberships.iter().all(|&m| m) && family.iter().all(|a| ctx.star_member(point, a))
            }
        };
        if !ok {
            status = Status::Fail;
        }
        rows.push(json!({"family": family, "verdict": verdict, "revalidated": ok}));
    }
    Ok(Outcome {
        status,
        summary: format!("{} families checked", families.len()),
        results: json!({
            "families": rows,
            "scope": "finite families only",
        }),
        log: ctx.ambient.log(),
    })
}

fn transfer(p: &Params) -> Result<Outcome> {
    let ctx = context(p)?;
    let mut sig = Signature::default();
    for (name, f) in p.named::<EqpFunction>("functions", "f = 2n+1")? {
        sig = sig.with_function(&name, f);
    }
    for (name, a) in p.named::<EpSet>("sets", "A = mult 3")? {
        sig = sig.with_set(&name, a);
    }
    let text = p.get("formula", "f(x) in A & x - 3 < 4");
    let phi = starlab::parse_formula(&text, &sig)?;
    let count: u64 = p.parsed("points", "20")?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let points: Vec<HyperNat> = (0..count).map(|_| random_point(&mut rng)).collect();
    let report = transfer_check(&phi, &sig, &ctx, &points)?;
    let status = if report.passed() {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(Outcome {
        status,
        summary: format!(
            "{}: truth set {}, Łoś at {} points: {}, universal closure agrees: {}",
            report.formula,
            report.truth_set,
            report.points.len(),
            report.los_agrees,
            report.universal.agrees
        ),
        results: to_json(&report),
        log: ctx.ambient.log(),
    })
}

fn orbit(p: &Params) -> Result<Outcome> {
    let ctx = context(p)?;
    let generators = p.functions("generators", "n+1; n^2")?;
    let depth: usize = p.parsed("depth", "3")?;
    let report = orbit_explore(&ctx.ambient, &generators, depth, ctx.horizon);
    let mut status = Status::Pass;
    if report
        .pairwise
        .iter()
        .any(|v| matches!(v.verdict, Equality::EqualUpTo { .. }))
    {
        status = Status::Inconclusive;
    }
    if report.directedness.iter().any(|d| !d.found) {
        status = Status::Fail;
    }
    Ok(Outcome {
        status,
        summary: format!(
            "{} orbit elements under {} generators{}",
            report.elements.len(),
            generators.len(),
            if report.truncated { " (truncated)" } else { "" }
        ),
        results: json!({"generators": generators, "orbit": report}),
        log: ctx.ambient.log(),
    })
}

fn parse_axioms(text: &str) -> Result<AxiomSet> {
    let axioms = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty() && *s != "none")
        .map(|s| s.parse::<Axiom>().map_err(anyhow::Error::from))
        .collect::<Result<Vec<_>>>()?;
    Ok(AxiomSet::new(axioms))
}

fn finite_search(p: &Params) -> Result<Outcome> {
    let k: usize = p.parsed("k", "2")?;
    let e: usize = p.parsed("e", "1")?;
    let required = parse_axioms(&p.get("require", "comp,equ,dir"))?;
    let budget: u64 = p.parsed("budget", "1000000")?;
    let universe = FiniteUniverse::new(k, e)?;
    let matrix = search_extensions(k, e, required, budget)?;

    let mut revalidated = true;
    for row in &matrix.rows {
        if let Some(table) = &row.first_model {
            let c = StarMapCandidate::from_table(&universe, table)?;
            revalidated &= row
                .axioms
                .is_subset(verify_candidate(&universe, &c).satisfied());
        }
    }
    let functional = AxiomSet::new([Axiom::Comp, Axiom::Equ, Axiom::Dir]);
    let counterexample = matrix
        .rows
        .iter()
        .any(|r| functional.is_subset(r.axioms) && r.models > 0);
    let status = if counterexample || !revalidated {
        Status::Fail
    } else if matrix.budget_exhausted {
        Status::Inconclusive
    } else {
        Status::Pass
    };
    let table: Vec<Value> = matrix
        .rows
        .iter()
        .map(|r| {
            json!({
                "axioms": r.axioms,
                "models": r.models,
                "bound": if matrix.budget_exhausted { "at least" } else { "exact" },
            })
        })
        .collect();
    let head = matrix.rows.first().map_or(0, |r| r.models);
    Ok(Outcome {
        status,
        summary: format!(
            "k={k}, e={e}, required {required}: {head} models{}",
            if matrix.budget_exhausted {
                " so far (budget exhausted)"
            } else {
                ""
            }
        ),
        results: json!({
            "table": table,
            "matrix": matrix,
            "modelsRevalidated": revalidated,
        }),
        log: Vec::new(),
    })
}

fn stone(p: &Params) -> Result<Outcome> {
    let ctx = context(p)?;
    let generators = p.sets("generators", "evens; mult 3")?;
    if generators.is_empty() {
        bail!("`generators` must name at least one set");
    }
    let points: Vec<HyperNat> = split_list(&p.get("points", "n; 2n+1; n^2"))
        .iter()
        .map(|s| s.parse().map(HyperNat::new))
        .collect::<std::result::Result<_, _>>()?;
    let s = FiniteStone::new(&generators);

    let window = 4096;
    let partition = (0..window).all(|n| s.atoms.iter().filter(|a| a.contains_u64(n)).count() == 1);
    let unions = (0..generators.len()).all(|i| {
        let union = s
            .generator_atoms(i)
            .iter()
            .fold(EpSet::empty(), |acc, &a| acc.union(&s.atoms[a]));
        union == generators[i]
    });
    let atoms: Vec<Value> = s
        .atoms
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let signs: Vec<String> = generators
                .iter()
                .zip(&s.signs[i])
                .map(|(g, &inside)| format!("{}{g}", if inside { "" } else { "not " }))
                .collect();
            json!({"atom": i, "set": a, "pattern": signs.join(" & ")})
        })
        .collect();
    let oracle_atom = s.trace(&ctx.ambient);
    let traces: Vec<Value> = points
        .iter()
        .map(|x| json!({"point": x, "atom": s.trace(&ctx.u_point(x))}))
        .collect();
    let status = if partition && unions {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(Outcome {
        status,
        summary: format!(
            "{} atoms from {} generators; {} lies in atom {oracle_atom}",
            s.atoms.len(),
            generators.len(),
            ctx.ambient
        ),
        results: json!({
            "atoms": atoms,
            "generatorAtoms": (0..generators.len()).map(|i| s.generator_atoms(i)).collect::<Vec<_>>(),
            "partitionChecked": partition,
            "generatorsAreUnions": unions,
            "oracleAtom": oracle_atom,
            "pointAtoms": traces,
        }),
        log: ctx.ambient.log(),
    })
}
