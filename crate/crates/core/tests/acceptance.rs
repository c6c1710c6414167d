//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --test acceptance`.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lcdecomp::cli::ProblemSpec;
use lcdecomp::decomp::{dmodule_length, hochster_multiplicities, regularity, terai_multiplicities};
use lcdecomp::exactlin::FieldSpec;
use lcdecomp::ideals::{intersection_quotient_dim, AmbientRing, Ideal, PurePowerIdeal};
use lcdecomp::oracle::compare;
use lcdecomp::poset::Poset;
use lcdecomp::random::{random_order, random_squarefree_supports};
use lcdecomp::roos::{
    constant_system, derived_colim_dims, derived_lim_dims, distributivity_check, limit_check, quotient_system_at,
    reduced_cohomology_via_roos, roos_chain, roos_cochain, skyscraper_system, Direction,
};
use lcdecomp::scomplex::reduced_betti;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMIT_POSET: Duration = Duration::from_secs(1);
const LIMIT_HOCHSTER: Duration = Duration::from_secs(1);
const LIMIT_TERAI: Duration = Duration::from_secs(1);
const LIMIT_DIAGNOSTICS: Duration = Duration::from_secs(5);
const LIMIT_ROOS: Duration = Duration::from_secs(60);
const LIMIT_ORACLE: Duration = Duration::from_secs(120);
const LIMIT_TWO_LINES: Duration = Duration::from_secs(1);

const ROOS_SEED: u64 = 0x5eed_0005;
const ROOS_POSETS_PER_FIELD: usize = 60;
const ROOS_POSET_SIZE: usize = 7;
const ORACLE_SEED: u64 = 0x5eed_0006;
const ORACLE_IDEALS: usize = 40;
const ORACLE_MAX_VARS: usize = 6;
const ORACLE_MAX_COMPONENTS: usize = 4;
const LAURENT_DEPTH: usize = 10;
const DEFECT_DEGREE: u32 = 4;
const ISO_DEGREE: u32 = 6;
const TWO_LINES_DEGREE: u32 = 6;

const Q: FieldSpec = FieldSpec::Rational;
const F2: FieldSpec = FieldSpec::Prime { p: 2 };

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn load(name: &str) -> Poset {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    ProblemSpec::parse(&text).and_then(|s| s.poset()).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn element(p: &Poset, name: &str) -> Result<usize, String> {
    (0..p.len()).find(|&q| p.element(q).to_string() == name).ok_or_else(|| format!("no element {name}"))
}

fn poset_goldens() -> Check {
    let pairs = load("pairs6.json");
    ensure(pairs.len() == 7, || format!("pairs poset has {} elements", pairs.len()))?;
    let edges = pairs.hasse_edges();
    ensure(edges.len() == 9, || format!("{} cover edges", edges.len()))?;
    let comps = pairs.components();
    let bottom = element(&pairs, "(x1, x2, x3, x4, x5, x6)")?;
    let middle: Vec<usize> = (0..7).filter(|q| !comps.contains(q) && *q != bottom).collect();
    for &m in &middle {
        let up = edges.iter().filter(|e| e.0 == m && comps.contains(&e.1)).count();
        ensure(up == 2, || format!("pairwise sum {m} is covered by {up} components"))?;
        ensure(edges.contains(&(bottom, m)), || format!("bottom is not covered by {m}"))?;
    }
    let tri = load("triangle.json");
    ensure(tri.len() == 4, || format!("triangle poset has {} elements", tri.len()))?;
    Ok("7 elements / 9 covers; 4 elements".into())
}

fn hochster_fixture() -> Check {
    let p = load("x_yz.json");
    let m = hochster_multiplicities(&p, Q);
    let expected = [element(&p, "(x, y)")?, element(&p, "(x, z)")?, element(&p, "(x, y, z)")?];
    for q in expected {
        ensure(m.get(1, q) == 1, || format!("M_1 at {} is {}", p.element(q), m.get(1, q)))?;
    }
    ensure(m.entries.len() == 3, || format!("{} nonzero entries", m.entries.len()))?;
    Ok("M_1 = 1 at (x,y), (x,z), (x,y,z); all else 0".into())
}

fn terai_fixture() -> Check {
    let p = load("x_yz.json");
    let m = terai_multiplicities(&p, Q);
    for name in ["(x, y)", "(x, z)", "(x, y, z)"] {
        let q = element(&p, name)?;
        ensure(m.get(2, q) == 1, || format!("m_2 at {name} is {}", m.get(2, q)))?;
    }
    ensure(m.entries.len() == 3, || format!("{} nonzero entries", m.entries.len()))?;
    let len = dmodule_length(&p, Q, 2).map_err(|e| e.to_string())?;
    ensure(len == 3, || format!("length {len}"))?;
    Ok("m_2 = 1 three times, length 3".into())
}

fn limit_diagnostics() -> Check {
    let lines = load("xyline.json");
    let verdict = distributivity_check(&lines, DEFECT_DEGREE).map_err(|e| e.to_string())?;
    let w = verdict.witness.ok_or("distributivity unexpectedly holds")?;
    ensure(w.ideals == ["(x)", "(y)", "(x - y)"], || format!("witness {:?}", w.ideals))?;
    let report = limit_check(&lines, DEFECT_DEGREE).map_err(|e| e.to_string())?;
    let bad = report.degrees.iter().find(|r| r.defect > 0).ok_or("no positive defect")?;
    let planes = load("three_planes.json");
    let report = limit_check(&planes, ISO_DEGREE).map_err(|e| e.to_string())?;
    ensure(report.degrees.iter().all(|r| r.defect == 0), || "three planes have a defect".into())?;
    Ok(format!("witness ((x),(y),(x - y)) in degree {}, defect {} at j={}; planes defect-free to {ISO_DEGREE}", w.degree, bad.defect, bad.j))
}

fn roos_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(ROOS_SEED);
    let mut checked = 0;
    for field in [Q, F2] {
        for _ in 0..ROOS_POSETS_PER_FIELD {
            let n = rng.gen_range(1..=ROOS_POSET_SIZE);
            let density = rng.gen_range(0.2..0.7);
            let o = random_order(&mut rng, n, density);
            let rank = o.rank();
            for q in 0..n {
                let colim = derived_colim_dims(&skyscraper_system(&o, q, 1, field).unwrap()).unwrap();
                let betti = reduced_betti(&o.open_upper_interval(q).unwrap().order_complex(&o), field);
                for (i, &c) in colim.iter().enumerate() {
                    ensure(c == betti.get(i as isize - 1), || format!("skyscraper at {q}: L_{i} = {c}"))?;
                }
                ensure(betti.iter().all(|(k, _)| k < rank), || "interval homology above the rank".into())?;
            }
            let roos = reduced_cohomology_via_roos(&o, field);
            ensure(roos == reduced_betti(&o.order_complex(), field), || format!("coaugmented: {roos:?}"))?;
            for dims in [1, 2] {
                let co = roos_cochain(&constant_system(&o, dims, Direction::Inverse, field)).unwrap();
                let ch = roos_chain(&constant_system(&o, dims, Direction::Direct, field)).unwrap();
                ensure(co.is_complex() && ch.is_complex(), || "d∘d != 0".into())?;
                ensure(co.spots.len() as isize <= rank + 1 && ch.spots.len() as isize <= rank + 1, || {
                    "spot above the rank".into()
                })?;
            }
            checked += 1;
        }
        // graded pieces of quotient systems, which carry nontrivial maps
        for _ in 0..10 {
            let supports = random_squarefree_supports(&mut rng, 4, 4);
            let p = squarefree_poset(4, &supports, field);
            for j in 0..=3 {
                let sys = quotient_system_at(&p, j).unwrap();
                let co = roos_cochain(&sys).unwrap();
                ensure(co.is_complex(), || "d∘d != 0 on a quotient system".into())?;
                ensure(co.spots.len() as isize <= p.rank() + 1, || "quotient spot above the rank".into())?;
            }
        }
    }
    Ok(format!("{checked} posets over QQ and GF(2)"))
}

fn squarefree_poset(d: usize, supports: &[Vec<usize>], field: FieldSpec) -> Poset {
    let ring = AmbientRing::standard(d, field);
    Poset::build(
        supports
            .iter()
            .map(|s| Ideal::PurePower(PurePowerIdeal::of_variables(ring.clone(), s).unwrap()))
            .collect(),
    )
    .unwrap()
}

fn oracle_inputs() -> Vec<(usize, Vec<Vec<usize>>, FieldSpec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED);
    (0..ORACLE_IDEALS)
        .map(|k| {
            let d = rng.gen_range(2..=ORACLE_MAX_VARS);
            let field = if k % 2 == 0 { Q } else { F2 };
            (d, random_squarefree_supports(&mut rng, d, ORACLE_MAX_COMPONENTS), field)
        })
        .collect()
}

fn oracle_equivalence() -> Check {
    for (d, supports, field) in oracle_inputs() {
        let p = squarefree_poset(d, &supports, field);
        let v = compare(&p, field, LAURENT_DEPTH).map_err(|e| e.to_string())?;
        ensure(v.equal, || format!("{supports:?} in {d} vars: {:?}", v.first_mismatch))?;
    }
    Ok(format!("{ORACLE_IDEALS} ideals, series + Laurent depth {LAURENT_DEPTH} + regularity"))
}

fn regularity_bound() -> Check {
    let mut worst = i64::MIN;
    for (d, supports, field) in oracle_inputs() {
        let p = squarefree_poset(d, &supports, field);
        let reg = regularity(&p, field).map_err(|e| e.to_string())?;
        ensure(reg <= supports.len() as i64, || format!("{supports:?}: regularity {reg}"))?;
        worst = worst.max(reg - supports.len() as i64);
    }
    Ok(format!("max(reg - n) = {worst}"))
}

fn two_lines() -> Check {
    let p = load("two_lines.json");
    let comps = p.component_ideals();
    let mut seen = Vec::new();
    for j in 0..=TWO_LINES_DEGREE {
        let dims = derived_lim_dims(&quotient_system_at(&p, j).unwrap()).unwrap();
        let expected = intersection_quotient_dim(&comps, j).unwrap();
        let literal = if j == 0 { 1 } else { 2 };
        ensure(dims[0] == expected && expected == literal, || format!("j={j}: H^0 {} vs {expected}", dims[0]))?;
        ensure(dims[1..].iter().all(|&x| x == 0), || format!("j={j}: higher {:?}", &dims[1..]))?;
        seen.push(dims[0].to_string());
    }
    Ok(format!("H^0 = {}", seen.join(",")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 poset goldens", poset_goldens, LIMIT_POSET),
        ("2 hochster (x,yz)", hochster_fixture, LIMIT_HOCHSTER),
        ("3 terai (x,yz)", terai_fixture, LIMIT_TERAI),
        ("4 limit diagnostics", limit_diagnostics, LIMIT_DIAGNOSTICS),
        ("5 roos cross-validation", roos_properties, LIMIT_ROOS),
        ("6 oracle equivalence", oracle_equivalence, LIMIT_ORACLE),
        ("7 regularity bound", regularity_bound, LIMIT_ORACLE),
        ("8 two lines", two_lines, LIMIT_TWO_LINES),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took <= limit => Ok(detail),
            Ok(_) => Err(format!("took {took:.2?}, limit {limit:?}")),
            Err(e) => Err(e),
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({took:.2?}): {detail}"),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {name} ({took:.2?}): {e}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
