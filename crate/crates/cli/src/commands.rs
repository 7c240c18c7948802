//! One function per subcommand, each producing a [`Report`].

use serde_json::{json, Value};

use qhh::hochschild::{self, BarComplex};
use qhh::koszul::{self, GradedCentre, QuadraticPresentation};
use qhh::monomial::{self, ApSets};
use qhh::ring::{finite_generation_probe, GradedRingTruncation, NilpotenceReport};
use qhh::{xu, Algebra, Presentation};

use crate::format::print_algebra;
use crate::report::{AlgebraInfo, Report, Status, Table};
use crate::{AlgebraArgs, Command, InputError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeSource {
    /// Graded centre of the algebra (e.g. of a Koszul dual).
    Centre,
    /// Hochschild cohomology ring of a finite-dimensional algebra.
    Hh,
}

struct Outcome {
    result: Value,
    tables: Vec<Table>,
    ok: bool,
}

pub fn execute(cmd: &Command, argv: Vec<String>) -> Result<Report, InputError> {
    let alg_args = match cmd {
        Command::Basis { alg, .. }
        | Command::Hh { alg, .. }
        | Command::ResolutionCheck { alg, .. }
        | Command::Stacked { alg, .. }
        | Command::Dual { alg }
        | Command::Centre { alg, .. }
        | Command::ExtTable { alg, .. }
        | Command::ProbeFingen { alg, .. } => alg,
    };
    let p = alg_args.load()?;
    let out = match cmd {
        Command::Basis { max_deg, .. } => basis(&p, *max_deg)?,
        Command::Hh { max_deg, mod_nilpotents, check_commutativity, cross_check, budget, .. } => {
            hh(&p, *max_deg, *mod_nilpotents, *check_commutativity, *cross_check, *budget)?
        }
        Command::ResolutionCheck { max_deg, .. } => resolution_check(&p, alg_args, *max_deg)?,
        Command::Stacked { max_deg, .. } => stacked(&p, *max_deg)?,
        Command::Dual { .. } => dual(&p)?,
        Command::Centre { max_deg, mod_nilpotents, .. } => centre(&p, *max_deg, *mod_nilpotents)?,
        Command::ExtTable { deg, .. } => ext_table(&p, *deg)?,
        Command::ProbeFingen { max_deg, source, .. } => probe(&p, *max_deg, *source)?,
    };
    Ok(Report {
        command: argv,
        algebra: AlgebraInfo::new(&alg_args.algebra, &p),
        status: if out.ok { Status::Ok } else { Status::CertificationFailed },
        result: out.result,
        elapsed_us: None,
        tables: out.tables,
    })
}

fn finite(p: &Presentation) -> Result<Algebra, InputError> {
    p.finite_algebra().map_err(|e| match e {
        qhh::Error::NotFiniteDimensional(_) | qhh::Error::NotHomogeneous(_) => {
            InputError::Invalid(format!("this command needs a finite-dimensional graded algebra: {e}"))
        }
        e => e.into(),
    })
}

fn basis(p: &Presentation, max_deg: Option<usize>) -> Result<Outcome, InputError> {
    let alg = match max_deg {
        Some(n) => p.truncated_algebra(n)?,
        None => finite(p)?,
    };
    let q = alg.quiver();
    let top = alg.max_degree();
    let paths: Vec<Vec<String>> =
        (0..=top).map(|d| alg.degree_range(d).map(|i| q.path_to_string(alg.path(i))).collect()).collect();
    let dims: Vec<usize> = paths.iter().map(Vec::len).collect();
    let mut listing = Table::new("basis", &["degree", "path"]);
    for (d, ps) in paths.iter().enumerate() {
        for s in ps {
            listing.row([d.to_string(), s.clone()]);
        }
    }
    Ok(Outcome {
        result: json!({
            "finite": alg.is_finite(),
            "max_degree": top,
            "dimension": alg.dim(),
            "dims": dims,
            "basis": paths,
        }),
        tables: vec![Table::per_degree("dims", "dim", &dims), listing],
        ok: true,
    })
}

fn labels_json(ring: &GradedRingTruncation, nil: &NilpotenceReport) -> Value {
    let per_degree: Vec<Value> = (0..=ring.max_degree())
        .map(|d| {
            Value::Array(
                (0..ring.dim(d))
                    .map(|i| {
                        json!({
                            "element": ring.label(d, i),
                            "weight": ring.weight(d, i),
                            "label": nil.labels[d][i],
                        })
                    })
                    .collect(),
            )
        })
        .collect();
    Value::Array(per_degree)
}

fn nilpotence_tables(ring: &GradedRingTruncation, nil: &NilpotenceReport) -> Vec<Table> {
    let mut dims = Table::new("mod_nilpotents", &["degree", "dim", "certified_nilpotent_ideal", "quotient"]);
    for d in 0..=ring.max_degree() {
        dims.row([d, ring.dim(d), nil.ideal_dims[d], nil.quotient_dims[d]]);
    }
    let mut labels = Table::new("labels", &["degree", "element", "label"]);
    for d in 0..=ring.max_degree() {
        for i in 0..ring.dim(d) {
            let l = serde_json::to_value(nil.labels[d][i]).expect("label serialises");
            labels.row([d.to_string(), ring.label(d, i).to_string(), l.as_str().unwrap_or_default().to_string()]);
        }
    }
    vec![dims, labels]
}

const QUOTIENT_NOTE: &str = "quotient by the ideal generated by certified nilpotent elements only: \
     an upper approximation of the quotient by all nilpotents";

fn hh(
    p: &Presentation,
    max_deg: usize,
    mod_nilpotents: bool,
    check_commutativity: bool,
    cross_check: bool,
    budget: usize,
) -> Result<Outcome, InputError> {
    let alg = finite(p)?;
    let mut cx = BarComplex::with_budget(&alg, budget)?;
    let dims = cx.hh_dims(max_deg)?;
    let mut result = json!({ "max_degree": max_deg, "dims": dims });
    let mut tables = vec![Table::per_degree("hh", "dim", &dims)];
    let mut ok = true;
    if cross_check {
        let centre = hochschild::centre(&alg).len();
        let outer = hochschild::derivations_mod_inner(&alg)?.quotient_dim();
        let hh0 = dims.first().copied();
        let hh1 = dims.get(1).copied();
        let matches = hh0.is_none_or(|d| d == centre) && hh1.is_none_or(|d| d == outer);
        ok &= matches;
        result["cross_check"] = json!({
            "centre_dim": centre,
            "derivations_mod_inner_dim": outer,
            "passed": matches,
        });
    }
    if mod_nilpotents || check_commutativity {
        let ring = cx.ring_truncation(max_deg)?;
        if mod_nilpotents {
            let reach = 2 * max_deg;
            let nil = ring.certify_nilpotence(&cx, reach);
            let probe = finite_generation_probe(&ring.ring, &nil);
            result["mod_nilpotents"] = json!({
                "note": QUOTIENT_NOTE,
                "power_reach": reach,
                "quotient_dims": nil.quotient_dims,
                "certified_nilpotent_ideal_dims": nil.ideal_dims,
                "new_generators": probe.new_generators,
                "labels": labels_json(&ring.ring, &nil),
            });
            tables.extend(nilpotence_tables(&ring.ring, &nil));
        }
        if check_commutativity {
            let rep = ring.check_graded_commutativity();
            ok &= rep.passed();
            result["graded_commutativity"] = json!({ "passed": rep.passed(), "report": rep });
        }
    }
    Ok(Outcome { result, tables, ok })
}

fn resolution_check(p: &Presentation, args: &AlgebraArgs, max_deg: usize) -> Result<Outcome, InputError> {
    let f = p.field;
    if *p != qhh::presentation::xu(f) {
        return Err(InputError::Invalid(format!(
            "resolution-check only knows the resolution of builtin:xu, not `{}`",
            args.algebra
        )));
    }
    let res = xu::build_resolution(f, max_deg)?;
    let complex = res.verify();
    let recursions = xu::check_g_recursions(f, max_deg);
    let hh = res.hh_dims();
    let ranks: Vec<usize> = res.slices.iter().map(|s| s.summands.len()).collect();
    let failures: Vec<&xu::RecursionCheck> = recursions.checks.iter().filter(|c| !c.holds).collect();
    let ok = complex.passed() && recursions.passed();
    let mut checks = Table::new("checks", &["check", "passed", "failures"]);
    checks.row([
        "d_squared".to_string(),
        complex.d_squared_failures.is_empty().to_string(),
        complex.d_squared_failures.len().to_string(),
    ]);
    checks.row([
        "minimality".to_string(),
        complex.minimality_failures.is_empty().to_string(),
        complex.minimality_failures.len().to_string(),
    ]);
    checks.row([
        "linearity".to_string(),
        complex.linearity_failures.is_empty().to_string(),
        complex.linearity_failures.len().to_string(),
    ]);
    checks.row(["g_recursions".to_string(), recursions.passed().to_string(), failures.len().to_string()]);
    Ok(Outcome {
        result: json!({
            "max_degree": max_deg,
            "passed": ok,
            "summands": ranks,
            "complex": complex,
            "recursions": {
                "passed": recursions.passed(),
                "checked": recursions.checks.len(),
                "failures": failures,
            },
            "hh_dims": hh,
        }),
        tables: vec![checks, Table::per_degree("summands", "rank", &ranks), Table::per_degree("hh", "dim", &hh)],
        ok,
    })
}

fn monomial_sets(p: &Presentation, n: usize) -> Result<ApSets, InputError> {
    ApSets::from_presentation(p, n).map_err(|e| match e {
        qhh::Error::NotMonomial(m) => InputError::Invalid(format!("this command needs a monomial algebra: {m}")),
        e => e.into(),
    })
}

fn stacked(p: &Presentation, max_deg: usize) -> Result<Outcome, InputError> {
    let sets = monomial_sets(p, max_deg)?;
    let verdict = monomial::is_da_stacked(&sets, max_deg);
    let q = sets.quiver();
    let mut listing = Table::new("sets", &["degree", "path", "length"]);
    let levels: Vec<Value> = (0..=sets.max_degree())
        .map(|n| {
            let paths = sets.paths(n);
            for path in &paths {
                listing.row([n.to_string(), q.path_to_string(path), path.len().to_string()]);
            }
            json!({
                "degree": n,
                "size": paths.len(),
                "lengths": paths.iter().map(|p| p.len()).collect::<Vec<_>>(),
                "paths": paths.iter().map(|p| q.path_to_string(p)).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(Outcome {
        result: json!({ "max_degree": max_deg, "verdict": verdict, "sets": levels }),
        tables: vec![listing],
        ok: true,
    })
}

fn dual(p: &Presentation) -> Result<Outcome, InputError> {
    let quad = QuadraticPresentation::new(p)?;
    let d = koszul::quadratic_dual(&quad);
    let dd = koszul::quadratic_dual(&d.dual);
    let double_dual_ok = quad.same_relations(&dd.dual);
    let q = &p.quiver;
    let primal = quad.relation_dims();
    let dual_dims = d.dual.relation_dims();
    let mut dims = Table::new("relation_dims", &["origin", "tail", "paths", "relations", "dual_relations"]);
    let mut rows = Vec::new();
    for ((i, j), r) in &primal {
        let paths = qhh::enumerate_paths(q, 2).iter().filter(|x| x.origin() == *i && x.tail() == *j).count();
        if paths == 0 {
            continue;
        }
        let dr = dual_dims[&(*j, *i)];
        dims.row([
            q.vertex_name(*i).to_string(),
            q.vertex_name(*j).to_string(),
            paths.to_string(),
            r.to_string(),
            dr.to_string(),
        ]);
        rows.push(json!({
            "origin": q.vertex_name(*i),
            "tail": q.vertex_name(*j),
            "paths": paths,
            "relations": r,
            "dual_relations": dr,
        }));
    }
    let mut rels = Table::new("dual_relations", &["relation", "as_reversed_paths"]);
    for (a, b) in d.relation_strings().iter().zip(d.reversed_strings()) {
        rels.row([a.clone(), b]);
    }
    let dual_p = d.dual.to_presentation();
    Ok(Outcome {
        result: json!({
            "relations": d.relation_strings(),
            "relations_as_reversed_paths": d.reversed_strings(),
            "relation_dims": rows,
            "double_dual_matches": double_dual_ok,
            "dual_fingerprint": crate::report::fingerprint(&dual_p),
            "dual_file": print_algebra(&dual_p),
        }),
        tables: vec![rels, dims],
        ok: double_dual_ok,
    })
}

fn centre(p: &Presentation, max_deg: usize, mod_nilpotents: bool) -> Result<Outcome, InputError> {
    let (centre, quotient) = if mod_nilpotents {
        let q = koszul::centre_mod_nilpotence(p, max_deg)?;
        let rest = (q.ring, q.nilpotence);
        (q.centre, Some(rest))
    } else {
        (GradedCentre::of_presentation(p, max_deg, max_deg + 1)?, None)
    };
    let dims = centre.dims();
    let super_fail = centre.check_supercommutation()?;
    let closure_fail = centre.check_closure()?;
    let ok = super_fail.is_empty() && closure_fail.is_empty();
    let alg = centre.algebra();
    let slices: Vec<Vec<String>> =
        (0..=max_deg).map(|n| centre.slice(n).basis.iter().map(|v| alg.display_vec(v)).collect()).collect();
    let mut result = json!({
        "max_degree": max_deg,
        "dims": dims,
        "slices": slices,
        "checks": {
            "supercommutation_failures": super_fail,
            "closure_failures": closure_fail,
            "passed": ok,
        },
    });
    let mut tables = vec![Table::per_degree("centre", "dim", &dims)];
    if let Some((ring, nil)) = quotient {
        let probe = finite_generation_probe(&ring, &nil);
        result["mod_nilpotents"] = json!({
            "note": QUOTIENT_NOTE,
            "power_reach": 2 * max_deg,
            "quotient_dims": nil.quotient_dims,
            "certified_nilpotent_ideal_dims": nil.ideal_dims,
            "new_generators": probe.new_generators,
            "labels": labels_json(&ring, &nil),
        });
        tables.extend(nilpotence_tables(&ring, &nil));
    }
    Ok(Outcome { result, tables, ok })
}

fn ext_table(p: &Presentation, deg: usize) -> Result<Outcome, InputError> {
    let sets = monomial_sets(p, deg)?;
    let t = monomial::ext_table(&sets, deg);
    let q = sets.quiver();
    let names = q.vertex_names();
    let mut cols = vec!["from"];
    cols.extend(names.iter().map(String::as_str));
    let mut table = Table::new("ext", &cols);
    for (i, row) in t.iter().enumerate() {
        table.row(std::iter::once(names[i].clone()).chain(row.iter().map(usize::to_string)));
    }
    Ok(Outcome { result: json!({ "degree": deg, "vertices": names, "table": t }), tables: vec![table], ok: true })
}

fn probe(p: &Presentation, max_deg: usize, source: ProbeSource) -> Result<Outcome, InputError> {
    let (ring, nil) = match source {
        ProbeSource::Centre => {
            let q = koszul::centre_mod_nilpotence(p, max_deg)?;
            (q.ring, q.nilpotence)
        }
        ProbeSource::Hh => {
            let alg = finite(p)?;
            let mut cx = BarComplex::new(&alg)?;
            let r = cx.ring_truncation(max_deg)?;
            let nil = r.certify_nilpotence(&cx, 2 * max_deg);
            (r.ring, nil)
        }
    };
    let probe = finite_generation_probe(&ring, &nil);
    let mut t = Table::new("probe", &["degree", "quotient", "new_generators"]);
    for d in 0..=max_deg {
        t.row([d, nil.quotient_dims[d], probe.new_generators[d]]);
    }
    Ok(Outcome {
        result: json!({
            "source": source,
            "max_degree": max_deg,
            "note": QUOTIENT_NOTE,
            "quotient_dims": nil.quotient_dims,
            "new_generators": probe.new_generators,
        }),
        tables: vec![t],
        ok: true,
    })
}
