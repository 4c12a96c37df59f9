#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any fails.

use std::path::Path;
use std::process::Command;

use kinetic_virial::ansatz::{
    brute_force_moment, ev_moments, nv_moments, vp_density_of_depth, vp_moments, Moment,
};
use kinetic_virial::einstein_vlasov::{build_ev_static_with, ev_consistency_residual, BUCHDAHL};
use kinetic_virial::nordstrom_vlasov::{
    build_nv_static_with, center_of_momentum_boost, lorentz_boost_invariants, nv_invariants,
    nv_report, LorentzInvariants, NvShooting,
};
use kinetic_virial::reports::{scan_sequence, RunOutcome, ScanParameter, ScanRow, ScanSpec};
use kinetic_virial::vlasov_poisson::{build_vp_polytrope, vp_invariants, vp_report};
use kinetic_virial::{
    run_from_config, AnsatzProfile, BuildOptions, Model, RunConfig, Tolerances, VirialReport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel_virial(r: &VirialReport) -> f64 {
    r.residuals[0].relative
}

// ---------------------------------------------------------------- VP

const VP_INDICES: [f64; 4] = [-0.5, 0.0, 1.0, 2.0];

fn vp_state(k: f64) -> AnsatzProfile {
    AnsatzProfile::isotropic(1.0, k, -1.0)
}

fn vp_virial(k: f64, tol: &Tolerances) -> Result<f64, String> {
    let s = build_vp_polytrope(&vp_state(k), 1.0, tol).map_err(|e| format!("k={k}: {e}"))?;
    let inv = vp_invariants(&s).map_err(|e| e.to_string())?;
    Ok(((inv.h + inv.e_kin) / inv.h).abs())
}

fn criterion_1() -> Verdict {
    let tol = Tolerances::default();
    let mut worst = 0.0f64;
    let mut min_ratio = f64::INFINITY;
    for k in VP_INDICES {
        let coarse = vp_virial(k, &tol)?;
        let fine = vp_virial(k, &tol.tightened(10.0))?;
        worst = worst.max(coarse);
        min_ratio = min_ratio.min(coarse / fine);
    }
    ensure(
        worst < 1e-3 && min_ratio >= 4.0,
        format!("max |H+E_kin|/|H| = {worst:.2e}, min drop under 10x tightening = {min_ratio:.2}x"),
    )
}

fn criterion_2() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut builds = 0;
    let mut boosts_checked = 0;
    let mut min_margin = f64::INFINITY;
    for (k, depth) in [
        (-0.5, 1.0),
        (0.0, 1.0),
        (1.0, 1.0),
        (2.0, 1.0),
        (3.0, 1.0),
        (1.0, 0.1),
        (1.0, 10.0),
        (0.5, 3.0),
    ] {
        let boosts: Vec<[f64; 3]> = (0..25)
            .map(|_| {
                [
                    rng.gen_range(-3.0..3.0),
                    rng.gen_range(-3.0..3.0),
                    rng.gen_range(-3.0..3.0),
                ]
            })
            .collect();
        let s = build_vp_polytrope(&vp_state(k), depth, &Tolerances::default())
            .map_err(|e| e.to_string())?;
        let rep = vp_report(&s, &boosts).map_err(|e| e.to_string())?;
        if !rep.checks_passed() {
            let bad: Vec<_> = rep
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name.clone())
                .collect();
            return Err(format!("k={k} depth={depth}: violated {bad:?}"));
        }
        builds += 1;
        boosts_checked += rep.checks.len() - 1;
        min_margin = min_margin.min(rep.min_relative_margin().unwrap_or(f64::INFINITY));
    }
    Ok(format!("{builds} builds with H < 0, {boosts_checked} boosts with H' < |Q'|^2/(2M), min relative margin {min_margin:.2e}"))
}

fn criterion_3() -> Verdict {
    let a = vp_state(-0.5);
    let depth = 1.0;
    let s = build_vp_polytrope(&a, depth, &Tolerances::default()).map_err(|e| e.to_string())?;
    let rho_c = vp_density_of_depth(&a, depth);
    let unit = (depth / rho_c).sqrt();
    let mut worst = 0.0f64;
    for (r, rho) in s.grid.nodes().iter().zip(&s.rho) {
        let xi = r / unit;
        let exact = if xi < std::f64::consts::PI {
            xi.sin() / xi
        } else {
            0.0
        };
        worst = worst.max((rho / rho_c - exact).abs());
    }
    let surface = (s.r_support / unit - std::f64::consts::PI).abs();
    ensure(
        worst < 1e-5 && surface < 1e-5,
        format!("max |rho/rho_c - sin(xi)/xi| = {worst:.2e}, |xi_surface - pi| = {surface:.2e}"),
    )
}

// ---------------------------------------------------------------- NV

fn nv_cases() -> Vec<(AnsatzProfile, NvShooting)> {
    vec![
        (AnsatzProfile::isotropic(1.0, 0.0, 0.9), NvShooting::Cutoff),
        (AnsatzProfile::isotropic(1.0, 1.0, 0.9), NvShooting::Cutoff),
        (AnsatzProfile::isotropic(1.0, 2.0, 0.8), NvShooting::Cutoff),
        (AnsatzProfile::isotropic(3.0, 0.5, 0.95), NvShooting::Cutoff),
        (
            AnsatzProfile::isotropic(1.0, 1.0, 0.5),
            NvShooting::CentralField(-0.2),
        ),
        (
            AnsatzProfile::isotropic(1.0, 1.0, 0.5),
            NvShooting::CentralField(-0.6),
        ),
        (
            AnsatzProfile::isotropic(1.0, -0.5, 0.5),
            NvShooting::CentralField(-1.0),
        ),
    ]
}

fn nv_reports() -> Result<Vec<VirialReport>, String> {
    nv_cases()
        .iter()
        .map(|(a, mode)| {
            let s = build_nv_static_with(a, *mode, &BuildOptions::default())
                .map_err(|e| format!("{a:?} {mode:?}: {e}"))?;
            nv_report(&s, &[]).map_err(|e| e.to_string())
        })
        .collect()
}

fn criterion_4(reports: &[VirialReport]) -> Verdict {
    let mut min_margin = f64::INFINITY;
    let mut worst = 0.0f64;
    for rep in reports {
        let c = rep.check("H < M").ok_or("missing H < M")?;
        if !c.passed || c.trivial {
            return Err(format!("H = {}, M = {}", c.lhs, c.rhs));
        }
        min_margin = min_margin.min(c.margin);
        worst = worst.max(rel_virial(rep));
    }
    ensure(
        worst < 1e-3,
        format!(
            "{} builds, min M - H = {min_margin:.3e}, max static virial residual / H = {worst:.2e}",
            reports.len()
        ),
    )
}

fn criterion_5(reports: &[VirialReport]) -> Verdict {
    let mut max_value = f64::NEG_INFINITY;
    let mut worst = 0.0f64;
    for rep in reports {
        let sweep: Vec<_> = rep
            .checks
            .iter()
            .filter(|c| c.name.starts_with("chi_R["))
            .collect();
        if sweep.len() != 10 || sweep.iter().any(|c| !c.passed) {
            return Err(format!("sweep of {} points, failures present", sweep.len()));
        }
        max_value = sweep.iter().map(|c| c.lhs).fold(max_value, f64::max);
        worst = worst.max(
            rep.residual("chi_R limit - (H - M)")
                .ok_or("missing limit residual")?
                .relative,
        );
    }
    ensure(
        worst < 1e-3,
        format!("max chi_R functional = {max_value:.3e}, max |limit - (H-M)|/|H-M| = {worst:.2e}"),
    )
}

fn criterion_6() -> Verdict {
    let s = build_nv_static_with(
        &AnsatzProfile::isotropic(1.0, 1.0, 0.9),
        NvShooting::Cutoff,
        &BuildOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let rest = nv_invariants(&s).map_err(|e| e.to_string())?;
    let moving = lorentz_boost_invariants(&rest, [0.4, -0.3, 0.2]);
    let norm = |i: &LorentzInvariants| i.h * i.h - i.q.iter().map(|x| x * x).sum::<f64>();
    let n0 = norm(&moving);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_norm = 0.0f64;
    let mut worst_rest = 0.0f64;
    for _ in 0..100 {
        let u = [
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
            rng.gen_range(-2.0..2.0),
        ];
        let b = lorentz_boost_invariants(&moving, u);
        if b.m != moving.m {
            return Err(format!("M changed: {} -> {}", moving.m, b.m));
        }
        worst_norm = worst_norm.max((norm(&b) - n0).abs() / n0);
        let r = lorentz_boost_invariants(&b, center_of_momentum_boost(&b));
        worst_rest = worst_rest.max(r.q.iter().map(|x| x * x).sum::<f64>().sqrt() / r.h);
    }
    ensure(
        worst_norm <= 1e-12 && worst_rest <= 1e-12,
        format!("100 boosts: M exact, max norm drift {worst_norm:.2e}, max |Q'|/H' in rest frame {worst_rest:.2e}"),
    )
}

// ---------------------------------------------------------------- EV

struct EvScan {
    label: &'static str,
    ansatz: AnsatzProfile,
    rows: Vec<ScanRow>,
}

fn ev_scans() -> Result<Vec<EvScan>, String> {
    let spec = ScanSpec {
        parameter: ScanParameter::Central,
        start: -0.05,
        stop: -1.0,
        count: 10,
        log: false,
    };
    let cases = [
        ("isotropic k=1", AnsatzProfile::isotropic(1.0, 1.0, 0.9)),
        ("isotropic k=0", AnsatzProfile::isotropic(1.0, 0.0, 0.9)),
        ("isotropic k=3/2", AnsatzProfile::isotropic(1.0, 1.5, 0.9)),
        (
            "shell k=1 l=1/2 F0=1",
            AnsatzProfile::shell(1.0, 1.0, 0.9, 0.5, 1.0),
        ),
        (
            "shell k=0 l=0 F0=1/2",
            AnsatzProfile::shell(1.0, 0.0, 0.9, 0.0, 0.5),
        ),
    ];
    cases
        .into_iter()
        .map(|(label, ansatz)| {
            let t = scan_sequence(
                Model::Ev,
                &ansatz,
                None,
                &spec,
                &BuildOptions::default(),
                &[],
            )
            .map_err(|e| e.to_string())?;
            if let Some(r) = t.rows.iter().find(|r| r.failure.is_some()) {
                return Err(format!(
                    "{label}: build failed at z_c = {} ({:?})",
                    r.param, r.failure
                ));
            }
            Ok(EvScan {
                label,
                ansatz,
                rows: t.rows,
            })
        })
        .collect()
}

fn margin(row: &ScanRow, name: &str) -> Result<f64, String> {
    row.margins
        .get(name)
        .copied()
        .ok_or_else(|| format!("row {} lacks '{name}'", row.param))
}

fn criterion_7(scans: &[EvScan]) -> Verdict {
    let mut worst = 0.0f64;
    let mut n = 0;
    for s in scans.iter().filter(|s| s.ansatz.is_isotropic()) {
        for r in &s.rows {
            worst = worst.max(r.virial_residual.ok_or("missing residual")?.abs());
            n += 1;
        }
    }
    ensure(
        worst < 1e-3,
        format!("{n} isotropic rows, max |H - int e^(lambda+mu)(h+p_rad+p_tan)|/H = {worst:.2e}"),
    )
}

fn criterion_8(scans: &[EvScan]) -> Verdict {
    let mut min_z = f64::INFINITY;
    let mut sup_b = 0.0f64;
    let mut n = 0;
    for s in scans {
        for r in &s.rows {
            let m = margin(r, "Zc >= |M/H-1|")?;
            let b = r.buchdahl_sup.ok_or("missing buchdahl_sup")?;
            if m < 0.0 || b > BUCHDAHL {
                return Err(format!(
                    "{} z_c = {}: redshift margin {m:e}, 2m/r = {b}",
                    s.label, r.param
                ));
            }
            min_z = min_z.min(m);
            sup_b = sup_b.max(b);
            n += 1;
        }
    }
    Ok(format!(
        "{n} rows incl. shells, min Zc - |M/H-1| = {min_z:.3e}, max sup 2m/r = {sup_b:.4}"
    ))
}

fn criterion_9(scans: &[EvScan]) -> Verdict {
    let mut worst_jeans = 0.0f64;
    let mut min_margin = f64::INFINITY;
    for s in scans.iter().filter(|s| s.ansatz.is_isotropic()) {
        for r in &s.rows {
            let (h, r2, e0) = (
                r.h.unwrap_or(f64::NAN),
                r.r2.unwrap_or(f64::NAN),
                r.e0.unwrap_or(f64::NAN),
            );
            worst_jeans = worst_jeans.max((e0 - (1.0 - 2.0 * h / r2).sqrt()).abs());
            min_margin = min_margin.min(margin(r, "e^mu(0) <= min(1,M/H) sqrt(1-2H/R2)")?);
        }
    }
    ensure(
        worst_jeans <= 1e-6 && min_margin >= 0.0,
        format!(
            "max |E0 - sqrt(1-2H/R2)| = {worst_jeans:.2e}, min redshift margin = {min_margin:.3e}"
        ),
    )
}

fn criterion_10(scans: &[EvScan]) -> Verdict {
    let mut min_margin = f64::INFINITY;
    let mut n = 0;
    for s in scans.iter().filter(|s| s.ansatz.f0 > 0.0) {
        for r in &s.rows {
            if !(r.r1.unwrap_or(0.0) > 0.0) {
                return Err(format!(
                    "{} z_c = {}: no inner vacuum region",
                    s.label, r.param
                ));
            }
            min_margin = min_margin.min(margin(r, "shell R1 <= 18H/ln(|M/H-1|+1)")?);
            n += 1;
        }
    }
    ensure(
        n > 0 && min_margin >= 0.0,
        format!("{n} shell rows, min 18H/ln(|M/H-1|+1) - R1 = {min_margin:.3e}"),
    )
}

fn criterion_11() -> Verdict {
    let cases = [
        (AnsatzProfile::isotropic(1.0, 1.0, 0.9), -0.3),
        (AnsatzProfile::isotropic(1.0, 2.0, 0.9), -0.6),
        (AnsatzProfile::isotropic(1.0, 1.0, 0.9), -1.2),
        (AnsatzProfile::shell(1.0, 1.0, 0.9, 0.5, 1.0), -0.3),
        (AnsatzProfile::shell(1.0, 0.0, 0.9, 0.0, 0.5), -1.0),
    ];
    // grid and tolerances refined together so the stored metric stays smooth
    // at the scale of the difference stencil
    let ladder = [(500, 1.0), (1000, 10.0), (2000, 100.0), (4000, 1000.0)];
    let mut worst_default = 0.0f64;
    let mut min_gain = f64::INFINITY;
    for (a, zc) in cases {
        let at = |nodes: usize, f: f64| {
            let o = BuildOptions {
                grid_nodes: nodes,
                tol: Tolerances::default().tightened(f),
                ..BuildOptions::default()
            };
            build_ev_static_with(&a, zc, &o)
                .map(|s| ev_consistency_residual(&s))
                .map_err(|e| e.to_string())
        };
        let d = BuildOptions::default();
        worst_default = worst_default.max(at(d.grid_nodes, 1.0)?);
        let seq = ladder
            .iter()
            .map(|&(n, f)| at(n, f))
            .collect::<Result<Vec<_>, _>>()?;
        for w in seq.windows(2) {
            min_gain = min_gain.min(w[0] / w[1]);
        }
    }
    ensure(
        worst_default < 1e-3 && min_gain >= 2.0,
        format!("max residual at defaults = {worst_default:.2e}, min reduction per refinement = {min_gain:.2}x"),
    )
}

// ---------------------------------------------------------------- moments

fn criterion_12() -> Verdict {
    let qt = Tolerances::default().quad_tol;
    let mut lattice: Vec<(Model, AnsatzProfile, f64, f64)> = Vec::new();
    for k in [-0.5, 0.0, 0.5, 1.0, 2.0, 3.0] {
        for u in [-3.0, -2.0, -1.5, -1.2, -1.02] {
            lattice.push((Model::Vp, AnsatzProfile::isotropic(1.0, k, -1.0), u, 1.0));
        }
    }
    for k in [-0.5, 0.0, 0.5, 1.0, 2.0, 3.0] {
        for phi in [-1.5, -1.0, -0.6, -0.3, -0.12] {
            lattice.push((Model::Nv, AnsatzProfile::isotropic(1.0, k, 0.9), phi, 1.0));
        }
    }
    for k in [-0.5, 0.0, 1.0, 2.0] {
        for (mu, r) in [
            (-1.0, 0.3),
            (-0.5, 0.7),
            (-0.3, 1.5),
            (-0.15, 2.0),
            (-0.11, 4.0),
        ] {
            lattice.push((Model::Ev, AnsatzProfile::isotropic(1.0, k, 0.9), mu, r));
        }
    }
    for (k, l, f0) in [
        (1.0, 0.5, 1.0),
        (0.0, 0.0, 0.5),
        (2.0, 1.0, 0.3),
        (0.5, 0.5, 0.1),
    ] {
        for mu in [-1.0, -0.7, -0.5, -0.4, -0.3] {
            lattice.push((Model::Ev, AnsatzProfile::shell(1.0, k, 0.9, l, f0), mu, 2.0));
        }
    }
    let mut worst = 0.0f64;
    let mut where_worst = String::new();
    for (model, a, field, r) in &lattice {
        let reduced = match model {
            Model::Vp => vp_moments(a, *field),
            Model::Nv => nv_moments(a, *field, qt),
            Model::Ev => ev_moments(a, *field, *r, qt),
        }
        .map_err(|e| e.to_string())?;
        if !(reduced.rho > 0.0) {
            return Err(format!(
                "{model:?} {a:?} field={field} r={r}: empty lattice point"
            ));
        }
        for m in Moment::ALL {
            let exact = m.pick(&reduced);
            let brute = brute_force_moment(a, *field, *r, m, *model);
            let err = (brute - exact).abs() / exact.abs().max(f64::MIN_POSITIVE);
            if err > worst {
                worst = err;
                where_worst = format!(
                    "{model:?} k={} l={} F0={} field={field} r={r} {m:?}",
                    a.k, a.l, a.f0
                );
            }
        }
    }
    ensure(
        worst < 1e-6,
        format!(
            "{} points x 5 moments, max relative deviation {worst:.2e} ({where_worst})",
            lattice.len()
        ),
    )
}

// ---------------------------------------------------------------- CLI

fn kvirial(args: &[&str], workers: Option<&str>) -> Result<(i32, Vec<u8>), String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kvirial"));
    cmd.args(args);
    if let Some(w) = workers {
        cmd.env("VIRIAL_WORKERS", w);
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).expect("write config");
    p.to_string_lossy().into_owned()
}

fn criterion_13() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let scan = r#"{"model":"ev","ansatz":{"c":1,"k":1,"e0":0.9},
        "scan":{"parameter":"central","start":-0.05,"stop":-0.8,"count":8}}"#;
    let scan_cfg = write(d, "scan.json", scan);
    let (c1, csv1) = kvirial(&["scan", "--config", &scan_cfg], Some("1"))?;
    let (c2, csv2) = kvirial(&["scan", "--config", &scan_cfg], Some("4"))?;
    let (c3, json1) = kvirial(&["scan", "--config", &scan_cfg, "--format", "json"], None)?;
    let (c4, json2) = kvirial(&["scan", "--config", &scan_cfg, "--format", "json"], None)?;
    if (c1, c2, c3, c4) != (0, 0, 0, 0) {
        return Err(format!("scan exit codes {:?}", (c1, c2, c3, c4)));
    }
    if csv1 != csv2 || json1 != json2 {
        return Err("repeated runs differ".into());
    }
    let header = "param,Zc,H,M,binding,R1,R2,E0,virial_residual,buchdahl_sup,checks_passed\n";
    if !csv1.starts_with(header.as_bytes()) || csv1.contains(&b'\r') {
        return Err("CSV header or line endings wrong".into());
    }
    let parsed: RunOutcome = serde_json::from_slice(&json1).map_err(|e| e.to_string())?;
    let direct = run_from_config(&RunConfig::from_json(scan).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    if parsed != direct {
        return Err("JSON does not round-trip to the in-process result".into());
    }

    let vacuum = write(
        d,
        "vac.json",
        r#"{"model":"nv","ansatz":{"c":0,"k":1,"e0":0.9},"central":-0.2}"#,
    );
    let star = write(
        d,
        "star.json",
        r#"{"model":"nv","ansatz":{"c":1,"k":1,"e0":0.9}}"#,
    );
    let bad_count = write(
        d,
        "bad.json",
        r#"{"model":"vp","ansatz":{"c":1,"k":1,"e0":-1},"scan":{"parameter":"central","start":1,"stop":2,"count":1}}"#,
    );
    let all_fail = write(
        d,
        "fail.json",
        r#"{"model":"ev","ansatz":{"c":1,"k":1,"e0":0.9},"scan":{"parameter":"central","start":0.1,"stop":0.5,"count":3}}"#,
    );
    let codes = [
        (
            "vacuum check",
            kvirial(&["check", "--config", &vacuum], None)?.0,
            0,
        ),
        (
            "star check",
            kvirial(&["check", "--config", &star], None)?.0,
            0,
        ),
        (
            "scan count 1",
            kvirial(&["scan", "--config", &bad_count], None)?.0,
            2,
        ),
        (
            "model conflict",
            kvirial(&["build", "--model", "ev", "--config", &star], None)?.0,
            2,
        ),
        (
            "missing file",
            kvirial(
                &["check", "--config", &d.join("none.json").to_string_lossy()],
                None,
            )?
            .0,
            2,
        ),
        (
            "all rows failed",
            kvirial(&["scan", "--config", &all_fail], None)?.0,
            2,
        ),
    ];
    if let Some((what, got, want)) = codes.iter().find(|(_, got, want)| got != want) {
        return Err(format!("{what}: exit {got}, expected {want}"));
    }
    // a violated inequality cannot be produced by a correct build; check the mapping directly
    let mut report = VirialReport::new(
        Model::Vp,
        Tolerances::default(),
        kinetic_virial::report::GridMeta {
            nodes: 1,
            r_eps: 1e-6,
            r_max: 1.0,
        },
    );
    report
        .checks
        .push(kinetic_virial::Check::lt("H < 0", 1.0, 0.0));
    let row = ScanRow::from_report(0.0, &report);
    let violated = RunOutcome::Single {
        row,
        report: Box::new(report),
    };
    ensure(
        violated.exit_code() == 1,
        format!("byte-identical CSV/JSON across runs and worker counts, JSON round-trips, exit codes {:?} and 1 on violation", codes.map(|c| c.2)),
    )
}

fn main() {
    let mut results: Vec<(u32, &str, Verdict)> = Vec::new();
    results.push((1, "VP virial identity", criterion_1()));
    results.push((2, "VP sign and Galilean boosts", criterion_2()));
    results.push((3, "Lane-Emden n=1 profile", criterion_3()));
    match nv_reports() {
        Ok(reps) => {
            results.push((4, "NV mass-energy and static virial", criterion_4(&reps)));
            results.push((5, "NV multiplier inequality", criterion_5(&reps)));
        }
        Err(e) => {
            results.push((4, "NV mass-energy and static virial", Err(e.clone())));
            results.push((5, "NV multiplier inequality", Err(e)));
        }
    }
    results.push((6, "Lorentz transform laws", criterion_6()));
    match ev_scans() {
        Ok(scans) => {
            results.push((7, "EV virial identity", criterion_7(&scans)));
            results.push((8, "EV redshift and Buchdahl bounds", criterion_8(&scans)));
            results.push((9, "EV Jeans relations", criterion_9(&scans)));
            results.push((10, "EV shell bound", criterion_10(&scans)));
        }
        Err(e) => {
            for (i, n) in [
                (7, "EV virial identity"),
                (8, "EV redshift and Buchdahl bounds"),
                (9, "EV Jeans relations"),
                (10, "EV shell bound"),
            ] {
                results.push((i, n, Err(e.clone())));
            }
        }
    }
    results.push((11, "EV tangential field equation", criterion_11()));
    results.push((12, "moment oracle equivalence", criterion_12()));
    results.push((13, "determinism and exit codes", criterion_13()));

    let mut failed = 0;
    for (id, name, v) in &results {
        match v {
            Ok(d) => println!("criterion {id:>2} PASS  {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {d}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
