//! Acceptance gate: one test per criterion, each printing a single
//! PASS line on success.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use sessions::checker::{check_session, Ctx};
use sessions::dsl::{self, parse_model};
use sessions::harness::{
    generate_model, soundness_property, subject_reduction_property,
};
use sessions::report::Report;
use sessions::safety::{check_ac, check_lf, ViolationKind};
use sessions::security::Lattice;
use sessions::types::{
    agrees, equirec_eq, participants, project, reduce_type, residual, safe_type, subtype,
    subtype_with_stats, GlobalType, SessionType,
};
use sessions::Level;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sessions"))
        .args(args)
        .env("SESSIONS_COLOR", "0")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

const SIGMA: [&str; 5] = [
    r#"p1 -> p0: l("v1"^{mid,phi})"#,
    r#"p1 -> p0: l("v2"^{bot,psi})"#,
    r#"p0 -> p2: l("v2"^{bot,psi})"#,
    r#"p2 -> p0: l("v3"^{bot,psi})"#,
    r#"p0 -> p1: l("v3"^{bot,psi})"#,
];

#[test]
fn criterion_1_pc_end_to_end() {
    let pc = fixture("pc.session");
    let pc = pc.to_str().unwrap();
    let started = Instant::now();

    let check = run(&["check", pc]);
    assert_eq!(code(&check), 0, "check failed: {}", stdout(&check));

    let oracle = run(&["oracle", pc, "--depth", "5"]);
    assert_eq!(code(&oracle), 0);
    assert!(stdout(&oracle).contains("0 violations"));

    for seed in ["0", "1", "12345"] {
        let sim = run(&["simulate", pc, "--depth", "5", "--seed", seed]);
        assert_eq!(code(&sim), 0);
        let printed = stdout(&sim);
        let lines: Vec<&str> = printed.lines().collect();
        assert_eq!(lines, SIGMA.to_vec(), "seed {seed} deviated from sigma");
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 1 (PC end-to-end): PASS");
}

#[test]
fn criterion_2_projection_golden() {
    let pc = fixture("pc.session");
    let pc = pc.to_str().unwrap();
    let golden = "p1?l(str^{mid,phi}).p1?l(str^{bot,psi}).p2!l(str^{bot,psi}).\
                  p2?l(str^{bot,psi}).p1!l(str^{bot,psi}).end";

    let plain = run(&["project", pc, "p0"]);
    assert_eq!(code(&plain), 0);
    assert_eq!(stdout(&plain).trim(), golden);

    let safe = run(&["project", pc, "p0", "--check-safe"]);
    assert_eq!(code(&safe), 0);
    let lines: Vec<String> = stdout(&safe).lines().map(str::to_owned).collect();
    assert_eq!(lines, vec![golden.to_owned(), "safe".to_owned()]);
    println!("criterion 2 (projection golden): PASS");
}

#[test]
fn criterion_3_negative_controls() {
    // (a) independence removed: rejected with an unsafe-type diagnosis.
    let noindep = fixture("pc_noindep.session");
    let a = run(&["check", noindep.to_str().unwrap()]);
    assert_eq!(code(&a), 1);
    assert!(stdout(&a).contains("not safe"), "got: {}", stdout(&a));

    // (b) the relay process cannot be typed once the topics are related.
    let leak = fixture("relay_leak.session");
    let b = run(&["check", leak.to_str().unwrap()]);
    assert_eq!(code(&b), 1);
    assert!(stdout(&b).contains("not safe"));

    // (c) the oracle pins exactly one LF violation at pair (0,1).
    let json = std::env::temp_dir().join("acceptance_relay_leak.json");
    let c = run(&[
        "oracle",
        leak.to_str().unwrap(),
        "--depth",
        "4",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&c), 1);
    let report = Report::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report.verdict, "fail");
    assert_eq!(report.findings.len(), 1);
    assert_eq!(report.findings[0].kind, "leak-freedom");
    assert_eq!(report.findings[0].indices, vec![0, 1]);
    println!("criterion 3 (negative controls): PASS");
}

#[test]
fn criterion_4_residual_golden() {
    let g = dsl::parse_global_str(
        "r -> s: lp(nat^{bot,phi}). p -> q: l(bool^{top,psi}). end",
    )
    .unwrap();
    let got = residual(&g, &"p".into(), &"l".into(), &"q".into()).unwrap();
    let want = dsl::parse_global_str("r -> s: lp(nat^{bot,phi}). end").unwrap();
    assert_eq!(got, want);

    assert!(residual(&GlobalType::End, &"p".into(), &"l".into(), &"q".into()).is_err());
    assert!(residual(
        &GlobalType::Var("t".into()),
        &"p".into(),
        &"l".into(),
        &"q".into()
    )
    .is_err());
    println!("criterion 4 (residual golden): PASS");
}

#[test]
fn criterion_5_theorem_suites() {
    let started = Instant::now();
    let mut typable = 0;
    for seed in 0..500u64 {
        let m = generate_model(seed);
        let ctx = m.ctx();
        if check_session(&m.session, &m.global, ctx).ok() {
            typable += 1;
        }
        let s = soundness_property(&m.session, &m.global, ctx, 6);
        assert!(s.pass, "soundness FAIL at seed {seed}: {}", s.detail);
        let sr = subject_reduction_property(&m.session, &m.global, ctx, 5);
        assert!(sr.pass, "subject reduction FAIL at seed {seed}: {}", sr.detail);
    }
    let elapsed = started.elapsed();
    assert!(
        typable >= 100,
        "only {typable}/500 generated models were typable"
    );
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!(
        "criterion 5 (theorem suites, {typable}/500 typable, {elapsed:?}): PASS"
    );
}

#[test]
fn criterion_6_metatheory() {
    // Lattice laws by exhaustive enumeration on lattices of up to 6
    // elements (a chain of 6 and the 5-point "double diamond").
    let chain6 = Lattice::from_covers(
        (0..6).map(|i| Level::from(format!("l{i}").as_str())),
        (0..5).map(|i| {
            (
                Level::from(format!("l{i}").as_str()),
                Level::from(format!("l{}", i + 1).as_str()),
            )
        }),
    )
    .unwrap();
    let m3 = Lattice::from_covers(
        ["z", "a", "b", "c", "o"].map(Level::from),
        [
            ("z", "a"),
            ("z", "b"),
            ("z", "c"),
            ("a", "o"),
            ("b", "o"),
            ("c", "o"),
        ]
        .map(|(x, y)| (Level::from(x), Level::from(y))),
    )
    .unwrap();
    for lat in [&chain6, &m3] {
        for a in lat.levels() {
            for b in lat.levels() {
                let j = lat.join(a, b).unwrap();
                let m = lat.meet(a, b).unwrap();
                assert_eq!(j, lat.join(b, a).unwrap());
                assert_eq!(m, lat.meet(b, a).unwrap());
                assert_eq!(lat.join(a, a).unwrap(), *a);
                assert_eq!(lat.meet(a, &j).unwrap(), *a);
                assert_eq!(lat.join(a, &m).unwrap(), *a);
                assert_eq!(lat.leq(a, b).unwrap(), lat.join(a, b).unwrap() == *b);
                for c in lat.levels() {
                    assert_eq!(
                        lat.join(&j, c).unwrap(),
                        lat.join(a, &lat.join(b, c).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    // Session types harvested from generated projectable global types.
    let mut types: Vec<SessionType> = Vec::new();
    let mut models = Vec::new();
    for seed in 0..120u64 {
        let m = generate_model(seed);
        for p in participants(&m.global) {
            types.push(project(&m.global, &p).unwrap());
        }
        models.push(m);
    }

    // Subtyping: reflexivity, transitivity, and the visited-set bound of
    // the coinductive procedure.
    for t in &types {
        assert!(subtype(t, t));
        let (ok, visited) = subtype_with_stats(t, t);
        assert!(ok);
        let bound = t.closure().len() * t.closure().len();
        assert!(visited <= bound, "visited {visited} > bound {bound}");
    }
    for window in types.chunks(3) {
        if let [a, b, c] = window {
            if subtype(a, b) && subtype(b, c) {
                assert!(subtype(a, c));
            }
        }
    }

    // Agreement and safety are preserved by type reduction.
    for m in &models {
        let ctx = m.ctx();
        for p in participants(&m.global) {
            let t = project(&m.global, &p).unwrap();
            let t_safe = safe_type(&t, ctx.policy, ctx.universe, ctx.lattice);
            for t2 in reduce_type(&t) {
                if t_safe {
                    assert!(
                        safe_type(&t2, ctx.policy, ctx.universe, ctx.lattice),
                        "safety lost under reduction of {}",
                        dsl::print_type(&t)
                    );
                }
                for level in ctx.lattice.levels() {
                    for topic in ctx.universe.topics() {
                        if agrees(level, topic, &t, ctx.universe, ctx.lattice) {
                            assert!(agrees(level, topic, &t2, ctx.universe, ctx.lattice));
                        }
                    }
                }
            }
        }
    }

    // Projection commutes with residuals: bystander projections are
    // untouched, and the consumed branch continuations subtype the
    // endpoints' new projections.
    for m in &models {
        let g = &m.global;
        for (p, label, q, g2) in sessions::types::reduce_global(g) {
            for r in participants(g) {
                let before = project(g, &r).unwrap();
                let Ok(after) = project(&g2, &r) else { continue };
                if r != p && r != q {
                    assert!(
                        equirec_eq(&before, &after),
                        "bystander {r} projection changed"
                    );
                } else {
                    let matches_reduct = reduce_type(&before)
                        .iter()
                        .any(|t| equirec_eq(t, &after) || subtype(t, &after));
                    assert!(
                        matches_reduct || equirec_eq(&before, &after),
                        "no reduct of {}'s projection yields {} (consumed {p}-{label}->{q})",
                        r,
                        dsl::print_type(&after)
                    );
                }
            }
        }
    }
    println!("criterion 6 (metatheory unit suites): PASS");
}

#[test]
fn criterion_7_tooling_contract() {
    // Round-trip on the whole fixture corpus.
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut count = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("session") {
            continue;
        }
        count += 1;
        let text = std::fs::read_to_string(&path).unwrap();
        let model = parse_model(&text).unwrap();
        for p in model.processes.values() {
            let printed = dsl::print_process(p);
            assert_eq!(&dsl::parse_process_str(&printed).unwrap(), p, "{printed}");
        }
        for g in model.globals.values() {
            let printed = dsl::print_global(g);
            assert_eq!(&dsl::parse_global_str(&printed).unwrap(), g, "{printed}");
        }
        for s in model.sessions.values() {
            for (_, p) in &s.members {
                let printed = dsl::print_process(p);
                assert_eq!(&dsl::parse_process_str(&printed).unwrap(), p, "{printed}");
            }
        }
        for p in participants(model.globals.values().next().unwrap()) {
            if let Ok(t) = project(model.globals.values().next().unwrap(), &p) {
                let printed = dsl::print_type(&t);
                assert_eq!(dsl::parse_type_str(&printed).unwrap(), t, "{printed}");
            }
        }
    }
    assert!(count >= 5, "fixture corpus shrank to {count} files");

    // JSON witness replay: the reported trace reproduces the violation.
    let leak = fixture("relay_leak.session");
    let json = std::env::temp_dir().join("acceptance_replay.json");
    let out = run(&[
        "oracle",
        leak.to_str().unwrap(),
        "--depth",
        "4",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let report = Report::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let model = parse_model(&std::fs::read_to_string(&leak).unwrap()).unwrap();
    for finding in &report.findings {
        let ac = check_ac(&finding.trace, &model.policy, &model.universe, &model.lattice).unwrap();
        let lf = check_lf(&finding.trace, &model.universe, &model.lattice).unwrap();
        let replayed: Vec<_> = ac.iter().chain(lf.iter()).collect();
        assert!(replayed.iter().any(|v| {
            let kind = match v.kind {
                ViolationKind::AccessControl => "access-control",
                ViolationKind::LeakFreedom => "leak-freedom",
            };
            kind == finding.kind && v.indices == finding.indices
        }));
    }

    // Exit-code contract: 0 ok, 1 semantic failure, 2 input error.
    assert_eq!(code(&run(&["check", fixture("pc.session").to_str().unwrap()])), 0);
    assert_eq!(
        code(&run(&["check", fixture("pc_noindep.session").to_str().unwrap()])),
        1
    );
    let bad = std::env::temp_dir().join("acceptance_bad.session");
    std::fs::write(&bad, "lattice { levels }}}").unwrap();
    assert_eq!(code(&run(&["check", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["oracle", "/nonexistent.session"])), 2);
    println!("criterion 7 (tooling contract): PASS");
}

/// The full check pipeline also works through the library API, so the
/// CLI layer adds nothing semantically.
#[test]
fn library_and_cli_agree_on_the_pc_fixture() {
    let text = std::fs::read_to_string(fixture("pc.session")).unwrap();
    let model = parse_model(&text).unwrap();
    let (_, session) = model.only_session().unwrap();
    let (_, global) = model.only_global().unwrap();
    let ctx = Ctx {
        lattice: &model.lattice,
        universe: &model.universe,
        policy: &model.policy,
    };
    assert!(check_session(session, global, ctx).ok());
    let out = run(&["check", fixture("pc.session").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}
