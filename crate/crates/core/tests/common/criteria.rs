//! The acceptance criteria as functions returning a one-line summary on
//! success and a description of the first failure otherwise.

use std::collections::VecDeque;
use std::process::Command;
use std::time::{Duration, Instant};

use avcheck::catalog::{
    all_types, catalog_form, catalog_milnor, catalog_resolution_graph, Family, SingularityType,
    Variant,
};
use avcheck::checker::{check_petrovskii, check_theorem_a, InequalityReport, Verdict};
use avcheck::local::{compute_qp, is_q_singularity, omega_twist, GraphVertex, ResolutionGraph};
use avcheck::rational::{frac, int, Rational};
use avcheck::scheme::CurveScheme;
use avcheck::{InertiaTriple, RationalSymmetricForm, SectorSideAssignment};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::GridOracle;
use super::sturm::sturm_inertia;
use super::*;

pub type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let el = t.elapsed();
    ensure(el < limit, || {
        format!("{what} took {el:?}, limit {limit:?}")
    })
}

/// The published matrix of a row, transcribed in its printed basis order.
fn printed_matrix(variant: Variant, n: i64) -> Vec<Vec<Rational>> {
    let h = frac(1, 2);
    match variant {
        Variant::NegX2nPlusY2 => vec![vec![frac(n, 2), frac(n, 2)], vec![frac(n, 2), frac(n, 2)]],
        Variant::X2nMinusY2 => vec![
            vec![frac(2 * n - 1, 2 * n), frac(1, 2 * n)],
            vec![frac(1, 2 * n), frac(2 * n - 1, 2 * n)],
        ],
        Variant::X2nPlusY2 => vec![vec![int(2 * n)]],
        Variant::NegX2nMinusY2 => vec![],
        Variant::X2n1PlusY2 => vec![vec![int(2 * n)]],
        Variant::X2n1MinusY2 => vec![vec![frac(2 * n, 2 * n + 1)]],
        Variant::XTimesX2nMinusY2 => vec![
            vec![int(1), h.clone(), h.clone()],
            vec![h.clone(), frac(n + 1, 2), frac(n, 2)],
            vec![h, frac(n, 2), frac(n + 1, 2)],
        ],
        Variant::XTimesX2nPlusY2 => vec![vec![int(4 * n - 2)]],
        Variant::XTimesX2n1 => vec![vec![int(2 * n + 1), int(1)], vec![int(1), int(1)]],
        Variant::NegXTimesX2n1 => vec![
            vec![frac(2 * n + 3, 4), frac(2 * n + 1, 4)],
            vec![frac(2 * n + 1, 4), frac(2 * n + 3, 4)],
        ],
        Variant::X4Y3 => vec![vec![int(6)]],
        Variant::NegX4Y3 => vec![vec![int(2)]],
        Variant::YTimesX3Y2 => vec![vec![frac(7, 2), frac(3, 2)], vec![frac(3, 2), frac(3, 2)]],
        Variant::X5Y3 => vec![vec![int(8)]],
    }
}

/// Catalog basis order relative to the printed one: the zero-angle sector
/// goes last in the catalog and first in the printed `D_{2n+2}` matrix.
fn printed_permutation(variant: Variant, dim: usize) -> Vec<usize> {
    match variant {
        Variant::XTimesX2nMinusY2 => vec![1, 2, 0],
        _ => (0..dim).collect(),
    }
}

fn milnor_for(family: Family, n: u32) -> Vec<u32> {
    match family {
        Family::A => vec![2 * n - 1, 2 * n],
        Family::D => vec![2 * n + 2, 2 * n + 3],
        Family::E => vec![6, 7, 8],
    }
}

/// Criterion 1: Every row for `n = 1..5` matches the printed table exactly.
pub fn catalog_regression() -> Outcome {
    let t0 = Instant::now();
    let mut checked = 0;
    let mut seen = std::collections::BTreeSet::new();
    for family in [Family::A, Family::D, Family::E] {
        for n in 1..=5u32 {
            for mu in milnor_for(family, n) {
                for t in avcheck::catalog::variants_for(family, mu) {
                    if !seen.insert(t) {
                        continue;
                    }
                    let printed = printed_matrix(t.variant(), t.n() as i64);
                    let got = catalog_form(&t).rows();
                    let p = printed_permutation(t.variant(), printed.len());
                    ensure(got.len() == printed.len(), || format!("{t}: dimension"))?;
                    for i in 0..got.len() {
                        for j in 0..got.len() {
                            ensure(got[i][j] == printed[p[i]][p[j]], || {
                                format!(
                                    "{t}: entry ({i},{j}) is {} not {}",
                                    got[i][j], printed[p[i]][p[j]]
                                )
                            })?;
                        }
                    }
                    checked += 1;
                }
            }
        }
    }
    let spot: [(&str, &str, Vec<Vec<Rational>>); 8] = [
        (
            "A1",
            "x^{2n}-y^2",
            vec![vec![frac(1, 2), frac(1, 2)], vec![frac(1, 2), frac(1, 2)]],
        ),
        (
            "A5",
            "x^{2n}-y^2",
            vec![vec![frac(5, 6), frac(1, 6)], vec![frac(1, 6), frac(5, 6)]],
        ),
        ("A2", "±x^{2n+1}-y^2", vec![vec![frac(2, 3)]]),
        (
            "D4",
            "±x(x^{2n}-y^2)",
            vec![
                vec![int(1), frac(1, 2), frac(1, 2)],
                vec![frac(1, 2), int(1), frac(1, 2)],
                vec![frac(1, 2), frac(1, 2), int(1)],
            ],
        ),
        (
            "D5",
            "x(x^{2n+1}±y^2)",
            vec![vec![int(3), int(1)], vec![int(1), int(1)]],
        ),
        ("E6", "-x^4±y^3", vec![vec![int(2)]]),
        (
            "E7",
            "±y(x^3±y^2)",
            vec![vec![frac(7, 2), frac(3, 2)], vec![frac(3, 2), frac(3, 2)]],
        ),
        ("E8", "±x^5±y^3", vec![vec![int(8)]]),
    ];
    for (name, variant, want) in spot {
        let t = SingularityType::parse(name, variant).map_err(|e| e.to_string())?;
        ensure(catalog_form(&t).rows() == want, || {
            format!("spot value {t}")
        })?;
    }
    within(t0, Duration::from_secs(1), "catalog regression")?;
    Ok(format!("{checked} rows (n = 1..5) and 8 spot values exact"))
}

/// Morsification record from the grid oracle, compared with the bundled
/// fixture and the catalog.
fn check_case(oracle: &GridOracle, case: &MorsificationCase) -> Result<(), String> {
    let t = case.singularity();
    let rho = t.real_branches();
    let derived = oracle
        .morsification(&case.poly, t.milnor_index(), rho, &case.probes)
        .map_err(|e| format!("{t}: oracle: {e}"))?;
    let expected = catalog_form(&t);
    let qp = compute_qp(&derived).map_err(|e| format!("{t}: {e}"))?;
    let qp = qp
        .reorder(expected.labels())
        .map_err(|e| format!("{t}: {e}"))?;
    ensure(qp == expected, || {
        format!("{t}: oracle fixture gives\n{qp}\nnot\n{expected}")
    })?;
    let bundled = bundled_fixture(&t).ok_or_else(|| format!("{t}: no bundled fixture"))?;
    let shape = |s: &avcheck::MorsifiedLocalScheme| {
        let mut b: Vec<(String, i64)> = s
            .regions()
            .iter()
            .filter(|r| !r.interior)
            .map(|r| (r.id.clone(), r.euler))
            .collect();
        b.sort();
        let mut i: Vec<i64> = s
            .regions()
            .iter()
            .filter(|r| r.interior)
            .map(|r| r.euler)
            .collect();
        i.sort();
        (
            s.mu(),
            s.rho(),
            s.nodes().len(),
            s.self_touching_nodes(),
            b,
            i,
        )
    };
    ensure(shape(&derived) == shape(&bundled), || {
        format!(
            "{t}: bundled fixture differs from the derived one: {:?} vs {:?}",
            shape(&bundled),
            shape(&derived)
        )
    })?;
    Ok(())
}

/// Criterion 2: Bundled fixtures reproduce the catalog and agree with fixtures
/// derived from explicit polynomials.
pub fn pipeline() -> Outcome {
    let mut bundled = 0;
    for t in all_types(14) {
        if let Some(fx) = bundled_fixture(&t) {
            let qp = compute_qp(&fx).map_err(|e| format!("{t}: {e}"))?;
            ensure(qp == catalog_form(&t), || {
                format!("{t}: bundled fixture gives\n{qp}")
            })?;
            bundled += 1;
        }
    }
    let files = std::fs::read_dir(data_dir().join("fixtures"))
        .map_err(|e| e.to_string())?
        .count();
    ensure(files == bundled, || {
        format!("{files} fixture files but {bundled} match a catalog row")
    })?;
    for (name, variant) in [
        ("A1", "x^{2n}-y^2"),
        ("A1", "-x^{2n}+y^2"),
        ("A2", "±x^{2n+1}-y^2"),
        ("A2", "±x^{2n+1}+y^2"),
        ("A3", "x^{2n}-y^2"),
        ("A3", "-x^{2n}+y^2"),
        ("D4", "±x(x^{2n}-y^2)"),
        ("E6", "x^4±y^3"),
        ("E6", "-x^4±y^3"),
    ] {
        let t = SingularityType::parse(name, variant).unwrap();
        ensure(bundled_fixture(&t).is_some(), || {
            format!("mandatory fixture {t} missing")
        })?;
    }
    let lens = bundled_fixture(&SingularityType::parse("A3", "x^{2n}-y^2").unwrap()).unwrap();
    ensure(
        compute_qp(&lens).unwrap().rows()
            == vec![vec![frac(3, 4), frac(1, 4)], vec![frac(1, 4), frac(3, 4)]],
        || "A3 lens".into(),
    )?;
    let oracle = GridOracle::default();
    let cases = morsification_cases();
    for case in &cases {
        check_case(&oracle, case)?;
    }
    Ok(format!(
        "{bundled} bundled fixtures exact; {} derived from polynomials agree",
        cases.len()
    ))
}

/// Criterion 3: Congruence diagonalization agrees with Sturm counts, and inertia is
/// a congruence invariant.
pub fn inertia_oracle() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut degenerate = 0;
    for k in 0..1000 {
        let n = rng.gen_range(0..=6);
        let a = random_symmetric(&mut rng, n);
        let got = form(a.clone()).inertia();
        let (p, m, z) = sturm_inertia(&a);
        ensure(got == InertiaTriple::new(p, m, z), || {
            format!("matrix #{k}: elimination {got}, Sturm ({p}, {m}, {z}) for {a:?}")
        })?;
        degenerate += usize::from(z > 0);
    }
    for k in 0..200 {
        let n = rng.gen_range(1..=6);
        let q = random_symmetric(&mut rng, n);
        let t = random_invertible(&mut rng, n);
        ensure(det(&t) != int(0), || "congruence is singular".into())?;
        let a = form(q.clone()).inertia();
        let b = form(congruence(&q, &t)).inertia();
        ensure(a == b, || format!("congruence #{k}: {a} vs {b}"))?;
    }
    within(t0, Duration::from_secs(10), "inertia oracle")?;
    Ok(format!(
        "1000 matrices ({degenerate} degenerate) and 200 congruences agree"
    ))
}

fn nonsingular_scheme(k: u32, chi: &[i64]) -> CurveScheme {
    let regions: Vec<String> = chi
        .iter()
        .enumerate()
        .map(|(i, c)| format!(r#"{{"id":"W{i}","chi_int":{c},"orientable":true}}"#))
        .collect();
    let chi_w: i64 = chi.iter().sum();
    CurveScheme::from_json(&format!(
        r#"{{"degree":{},"r":1,"nu":0,"regions":[{}],"chi_W":{chi_w},"chi_branch_in_W":0}}"#,
        2 * k,
        regions.join(",")
    ))
    .unwrap()
}

/// Criterion 4: Without singular points the check is the classical one.
pub fn classical_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut count = 0;
    for _ in 0..300 {
        let k = rng.gen_range(1..=6u32);
        let m = rng.gen_range(1..=8);
        let chi: Vec<i64> = (0..m).map(|_| rng.gen_range(-6..=1)).collect();
        let s = nonsingular_scheme(k, &chi);
        let q = s.assemble_partition_form().map_err(|e| e.to_string())?;
        let diag: Vec<Rational> = chi.iter().map(|c| int(-2 * c)).collect();
        let want = RationalSymmetricForm::diagonal(q.labels().to_vec(), diag).unwrap();
        ensure(q == want, || format!("form for {chi:?}"))?;
        let rep = check_theorem_a(&s).map_err(|e| e.to_string())?;
        let chi_w: i64 = chi.iter().sum();
        let (k_, chi_xr) = (k as i64, 2 * chi_w);
        let b2p = frac((k_ - 1) * (k_ - 2), 2);
        let b2m = frac(3 * k_ * (k_ - 1), 2) + frac(chi_xr, 2);
        let sp = chi.iter().filter(|c| **c < 0).count();
        let sm = chi.iter().filter(|c| **c > 0).count();
        let sz = chi.iter().filter(|c| **c == 0).count();
        ensure(rep.sigma == InertiaTriple::new(sp, sm, sz), || {
            format!("sigma for {chi:?}")
        })?;
        ensure(rep.b2_plus_y == b2p && rep.b2_minus_y == b2m, || {
            "b2 values".into()
        })?;
        ensure(
            rep.rhs1 == rep.b2_plus_y && rep.rhs3 == rep.b2_minus_y,
            || "cross-check".into(),
        )?;
        ensure(rep.holds1 == (int(sp as i64) <= b2p), || "Arnold +".into())?;
        ensure(rep.holds3 == (int(sm as i64) <= b2m), || "Arnold -".into())?;
        let (lo, hi) = check_petrovskii(chi_w, k);
        ensure(
            rep.petrovskii_lower_holds == Some(lo) && rep.petrovskii_upper_holds == Some(hi),
            || "classical bounds missing from report".into(),
        )?;
        count += 1;
    }
    for k in 1..=8u32 {
        let b = 3 * (k as i64) * (k as i64 - 1) / 2;
        ensure(check_petrovskii(-b, k) == (true, true), || {
            format!("lower equality k={k}")
        })?;
        ensure(!check_petrovskii(-b - 1, k).0, || {
            format!("below lower k={k}")
        })?;
        ensure(check_petrovskii(b + 1, k) == (true, true), || {
            format!("upper equality k={k}")
        })?;
        ensure(!check_petrovskii(b + 2, k).1, || {
            format!("above upper k={k}")
        })?;
    }
    ensure(check_petrovskii(11, 3) == (true, false), || {
        "11-oval sextic".into()
    })?;
    Ok(format!(
        "{count} random nonsingular schemes; bounds tight at equality for k = 1..8"
    ))
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_avcheck"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

/// Criterion 5: The 11-oval sextic schemes through the binary.
pub fn end_to_end() -> Outcome {
    let t0 = Instant::now();
    let dir = data_dir().join("schemes");
    let outer = dir.join("sextic_outer.json");
    let inner = dir.join("sextic_inner.json");
    let (code, json) = run_cli(&["--format", "json", "check", outer.to_str().unwrap()]);
    ensure(code == 1, || format!("outer sextic exit code {code}"))?;
    let rep: InequalityReport = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    ensure(rep.lhs3 == 0 && rep.rhs3 == int(-1) && !rep.holds3, || {
        format!("inequality 3 reads {} <= {}", rep.lhs3, rep.rhs3)
    })?;
    ensure(rep.verdict == Verdict::Prohibited, || {
        "outer verdict".into()
    })?;
    let (code, json) = run_cli(&["--format", "json", "check", inner.to_str().unwrap()]);
    ensure(code == 0, || format!("inner sextic exit code {code}"))?;
    let rep: InequalityReport = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    ensure(rep.verdict == Verdict::Consistent, || {
        "inner verdict".into()
    })?;
    within(t0, Duration::from_secs(1), "end-to-end")?;
    Ok("outer: 0 <= -1 fails, exit 1; inner: CONSISTENT, exit 0".into())
}

fn form_strategy(max_dim: usize) -> impl Strategy<Value = RationalSymmetricForm> {
    (0..=max_dim).prop_flat_map(|n| {
        proptest::collection::vec((-6i64..=6, 1i64..=4), n * (n + 1) / 2).prop_map(move |cells| {
            let mut rows = vec![vec![int(0); n]; n];
            let mut it = cells.into_iter();
            for i in 0..n {
                for j in i..n {
                    let (p, q) = it.next().unwrap();
                    rows[i][j] = frac(p, q);
                    rows[j][i] = frac(p, q);
                }
            }
            form(rows)
        })
    })
}

fn sides_for(f: &RationalSymmetricForm, signs: &[bool]) -> SectorSideAssignment {
    SectorSideAssignment::new(
        f.labels()
            .iter()
            .zip(signs)
            .map(|(l, s)| (l.clone(), if *s { 1 } else { -1 })),
    )
    .unwrap()
}

/// Criterion 6: Properties of the twist.
pub fn omega_properties() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 300,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = form_strategy(5).prop_flat_map(|f| {
        let n = f.dim();
        (
            Just(f),
            proptest::collection::vec(any::<bool>(), n),
            any::<bool>(),
        )
    });
    runner
        .run(&strategy, |(f, signs, c)| {
            let constant = sides_for(&f, &vec![c; f.dim()]);
            prop_assert_eq!(omega_twist(&f, &constant).unwrap(), f.clone());
            let sides = sides_for(&f, &signs);
            let once = omega_twist(&f, &sides).unwrap();
            prop_assert_eq!(omega_twist(&once, &sides).unwrap(), f.clone());
            prop_assert_eq!(once.inertia(), f.inertia());
            for i in 0..f.dim() {
                for j in 0..f.dim() {
                    let flip = signs[i] != signs[j];
                    let want = if flip {
                        -f.entry(i, j).clone()
                    } else {
                        f.entry(i, j).clone()
                    };
                    prop_assert_eq!(once.entry(i, j), &want);
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("identity, involution, inertia and entry signs over 300 random forms".into())
}

fn graph(n: usize, edges: &[(usize, usize)], genus: &[u32]) -> ResolutionGraph {
    let v = |i: usize| format!("v{i}");
    ResolutionGraph::new(
        (0..n)
            .map(|i| GraphVertex {
                id: v(i),
                genus: genus[i],
            })
            .collect(),
        edges.iter().map(|&(a, b)| (v(a), v(b))).collect(),
    )
    .unwrap()
}

/// Connected, every edge a bridge, all genera zero.
fn brute_force_tree(n: usize, edges: &[(usize, usize)], genus: &[u32]) -> bool {
    let connected = |skip: Option<usize>, from: usize, to: Option<usize>| {
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for (k, &(a, b)) in edges.iter().enumerate() {
                if Some(k) == skip {
                    continue;
                }
                for (x, y) in [(a, b), (b, a)] {
                    if x == u && !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        match to {
            Some(t) => seen[t],
            None => seen.iter().all(|s| *s),
        }
    };
    n > 0
        && genus.iter().all(|g| *g == 0)
        && connected(None, 0, None)
        && edges
            .iter()
            .enumerate()
            .all(|(k, &(a, b))| !connected(Some(k), a, Some(b)))
}

/// Criterion 7: Tree-of-spheres test.
pub fn q_singularity() -> Outcome {
    let mut ade = 0;
    for t in all_types(16) {
        let g = catalog_resolution_graph(&t);
        ensure(is_q_singularity(&g), || format!("{t} rejected"))?;
        let n = g.vertices().len();
        let index = |id: &str| g.vertices().iter().position(|v| v.id == id).unwrap();
        let edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|(a, b)| (index(a), index(b)))
            .collect();
        let c = cartan(n, &edges);
        ensure(
            det(&c) == int(cartan_det(t.family(), t.milnor_index())),
            || format!("{t}: graph is not the Dynkin diagram"),
        )?;
        let neg: Vec<Vec<Rational>> = c.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
        let (p, m, z) = sturm_inertia(&neg);
        let milnor = catalog_milnor(&t);
        ensure(
            (p as u32, m as u32, z) == (milnor.mu_plus, milnor.mu_minus, 0),
            || format!("{t}: Milnor data"),
        )?;
        ade += 1;
    }
    ensure(
        !is_q_singularity(&graph(3, &[(0, 1), (1, 2), (2, 0)], &[0, 0, 0])),
        || "triangle".into(),
    )?;
    ensure(!is_q_singularity(&graph(2, &[(0, 1)], &[0, 1])), || {
        "genus".into()
    })?;
    ensure(
        !is_q_singularity(&graph(2, &[(0, 1), (0, 1)], &[0, 0])),
        || "double edge".into(),
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut yes, mut no) = (0, 0);
    for k in 0..100 {
        let n: usize = rng.gen_range(1..=8);
        let m = rng.gen_range(n.saturating_sub(2)..=n + 1);
        let mut edges = Vec::new();
        while edges.len() < m && n > 1 {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b {
                edges.push((a, b));
            }
        }
        // bias towards trees so both answers occur
        if rng.gen_bool(0.5) && n > 1 {
            edges = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
        }
        let genus: Vec<u32> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.9) {
                    0
                } else {
                    rng.gen_range(1..=3)
                }
            })
            .collect();
        let want = brute_force_tree(n, &edges, &genus);
        let got = is_q_singularity(&graph(n, &edges, &genus));
        ensure(got == want, || {
            format!("random graph #{k}: {edges:?} {genus:?}")
        })?;
        if want {
            yes += 1;
        } else {
            no += 1;
        }
    }
    Ok(format!(
        "{ade} ADE diagrams accepted; 100 random graphs ({yes} trees, {no} not) match"
    ))
}
