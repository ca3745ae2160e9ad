//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::{half_line, points, quadrant, rel};
use rand::Rng;
use toeplitz_moment::coords::*;
use toeplitz_moment::geometry::{verify_hamiltonian, DomainPoint};
use toeplitz_moment::oracle::*;
use toeplitz_moment::special::romanovski_total;
use toeplitz_moment::spectra::*;
use toeplitz_moment::{MultiIndex, QuadratureSpec, Result, SymbolSpec};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn sym(s: &str) -> SymbolSpec {
    SymbolSpec::parse(s).unwrap()
}

fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec())
}

fn constant_symbol() -> Result<Outcome> {
    let start = Instant::now();
    let one = SymbolSpec::one();
    let mut dev: f64 = 0.0;
    for p in MultiIndex::all_up_to(2, 4) {
        dev = dev.max((gamma_qe(&one, 0.3, 2, &p, &spec())?.value - 1.0).norm());
    }
    for p in MultiIndex::all_up_to(1, 4) {
        dev = dev.max((gamma_qh_h0(&one, 0.3, 2, &p, &spec())?.value - 1.0).norm());
        for xi in [-2.0, 0.0, 1.5] {
            dev = dev.max((gamma_qh(&one, 0.3, 2, &p, xi, &spec())?.value - 1.0).norm());
        }
    }
    for xi in [-2.0, 0.0, 1.5] {
        dev = dev.max((gamma_hyperbolic(&one, 0.3, xi, &spec())?.value - 1.0).norm());
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        dev < 1e-10 && secs < 1.0,
        format!("max |gamma - 1| = {dev:.2e}, {secs:.2} s"),
    )
}

fn closed_form_qe() -> Result<Outcome> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let f = sym("1/(1+h1)");
    for p in 0..=10u32 {
        let g = gamma_qe(&f, 0.0, 1, &mi(&[p]), &spec())?;
        worst = worst.max(rel(g.value.re, 1.0 / (p as f64 + 2.0)));
    }
    let f = sym("h1/(1+h1+h2)");
    for p in MultiIndex::all_up_to(2, 6) {
        let g = gamma_qe(&f, 0.0, 2, &p, &spec())?;
        let want = (p.entries()[0] as f64 + 1.0) / (p.order() as f64 + 3.0);
        worst = worst.max(rel(g.value.re, want));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < 1e-8 && secs < 5.0,
        format!("max rel err = {worst:.2e}, {secs:.2} s"),
    )
}

fn diagonalization() -> Result<Outcome> {
    let start = Instant::now();
    let mut off: f64 = 0.0;
    let mut diag: f64 = 0.0;
    for lam in [0.0, 0.5] {
        for f in ["h1/(1+h1+h2)", "ind(h1 < 1) * ind(h2 < 2)"] {
            let r = verify_diagonalization(&sym(f), lam, 2, 4, &spec())?;
            off = off.max(r.max_offdiag);
            diag = diag.max(r.max_diag_dev);
        }
    }
    let control = toeplitz_matrix_ball(&|z| Ok(z[0].re.into()), 0.0, 2, 4, &spec())?.max_offdiag();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        off < 1e-5 && diag < 1e-5 && control > 1e-2 && secs < 120.0,
        format!("offdiag {off:.2e}, diag dev {diag:.2e}, Re z1 offdiag {control:.3}, {secs:.1} s"),
    )
}

fn hamiltonian() -> Result<Outcome> {
    let mut rng = common::rng(40);
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        for _ in 0..100 {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            for z in [
                DomainPoint::from(points::ball(&mut rng, n)),
                DomainPoint::from(points::siegel(&mut rng, n)),
            ] {
                worst = worst.max(verify_hamiltonian(&z, &x, 1e-5)?);
            }
        }
    }
    let mut ratios = Vec::new();
    for z in [
        DomainPoint::from(points::ball(&mut rng, 2)),
        DomainPoint::from(points::siegel(&mut rng, 2)),
    ] {
        let x = [0.7, -1.3];
        ratios.push(verify_hamiltonian(&z, &x, 2e-2)? / verify_hamiltonian(&z, &x, 1e-2)?);
    }
    let second_order = ratios.iter().all(|r| (3.0..5.0).contains(r));
    outcome(
        worst < 1e-6 && second_order,
        format!(
            "max residual {worst:.2e}, step-halving ratios {:.2} / {:.2}",
            ratios[0], ratios[1]
        ),
    )
}

fn coordinates() -> Result<Outcome> {
    let mut rng = common::rng(41);
    let dev = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let mut trip: f64 = 0.0;
    for n in 1..=3 {
        for _ in 0..1000 {
            let z = points::ball(&mut rng, n);
            trip = trip.max(dev(kappa_qe(&tau_qe(&z)?)?.coords(), z.coords()));
            let c = MomentCoordQe::new(
                points::torus(&mut rng, n),
                (0..n).map(|_| rng.random_range(0.01..5.0)).collect(),
            )?;
            trip = trip.max(dev(&tau_qe(&kappa_qe(&c)?)?.h, &c.h) / 5.0);
            let z = points::siegel(&mut rng, n);
            trip = trip.max(dev(kappa_qh(&tau_qh(&z)?)?.coords(), z.coords()) / 4.0);
            let mut h: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.01..5.0)).collect();
            h.push(rng.random_range(-3.0..3.0));
            let c = MomentCoordQh::new(points::torus(&mut rng, n - 1), rng.random_range(0.2..3.0), h)?;
            let back = tau_qh(&kappa_qh(&c)?)?;
            trip = trip.max(dev(&back.h, &c.h) / 5.0).max((back.s - c.s).abs() / c.s);
        }
    }
    let mut jac: f64 = 0.0;
    for k in 0..200 {
        let n = 1 + k % 3;
        let r: Vec<f64> = loop {
            let r: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..0.9)).collect();
            if r.iter().map(|v| v * v).sum::<f64>() < 0.85 {
                break r;
            }
        };
        jac = jac.max(rel(fd_jacobian_det(phi_qe, &r, 1e-6), jacobian_det_qe(&r)?));
        let mut arg: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.05..1.0)).collect();
        let y = arg.iter().map(|v| v * v).sum::<f64>() + rng.random_range(0.2..2.0);
        let x = rng.random_range(-2.0..2.0);
        let want = jacobian_det_qh(&arg, x, y)?;
        arg.extend([x, y]);
        jac = jac.max(rel(fd_jacobian_det(phi_qh, &arg, 1e-6).abs(), want));
    }
    let mut mass: f64 = 0.0;
    for lam in [-0.5, 0.0, 1.0] {
        let one = torus_mass(1) * half_line(|h| measure_density_qe(&[h], lam), &[]);
        let two = torus_mass(2) * quadrant(|x, y| measure_density_qe(&[x, y], lam), &[], &[]);
        mass = mass.max((one - 1.0).abs()).max((two - 1.0).abs());
    }
    outcome(
        trip < 1e-12 && jac < 1e-6 && mass < 1e-8,
        format!("round trip {trip:.2e}, Jacobian rel {jac:.2e}, |mass - 1| {mass:.2e}"),
    )
}

fn romanovski() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for a in [-2.0, 0.1, 2.0] {
        worst = worst.max(rel(romanovski_total(a, 0.0)?, (1.0 - (-PI * a).exp()) / a));
    }
    worst = worst.max((romanovski_total(0.0, -0.5)? - 2.0).abs() / 2.0);
    for a in [-3.0, -1.0, -0.2, 0.5, 1.7, 4.0] {
        for b in [-3.0, -1.0, -0.5, 0.0, 0.3, 0.45] {
            let lhs = romanovski_total(a, b)?;
            worst = worst.max(rel(lhs, (-PI * a).exp() * romanovski_total(-a, b)?));
        }
    }
    outcome(worst < 1e-10, format!("max rel err {worst:.2e}"))
}

fn hyperbolic() -> Result<Outcome> {
    let f = sym("ind(u > 0)");
    let at0 = (gamma_hyperbolic(&f, 0.0, 0.0, &spec())?.value.re - 0.5).abs();
    let xis: Vec<f64> = (0..81).map(|k| -10.0 + 0.25 * k as f64).collect();
    let t = GammaTable::compute(Case::Hyp, &f, 0.0, 1, &[mi(&[])], &xis, &spec())?;
    let monotone = t.entries.windows(2).all(|w| w[1].gamma_re > w[0].gamma_re);
    let top = gamma_hyperbolic(&f, 0.0, 30.0, &spec())?.value.re;
    let bottom = gamma_hyperbolic(&f, 0.0, -30.0, &spec())?.value.re;
    let mut refl: f64 = 0.0;
    for (g, g_neg) in [
        ("atan(u) + ind(u > 1)", "atan(-u) + ind(-u > 1)"),
        ("ind(u > 0)", "ind(-u > 0)"),
    ] {
        for xi in [-2.0, -0.5, 0.7, 3.0] {
            let a = gamma_hyperbolic(&sym(g_neg), 0.5, xi, &spec())?.value;
            let b = gamma_hyperbolic(&sym(g), 0.5, -xi, &spec())?.value;
            refl = refl.max((a - b).norm());
        }
    }
    outcome(
        at0 < 1e-10 && monotone && top > 0.99 && bottom < 0.01 && refl < 1e-10,
        format!(
            "|gamma(0) - 1/2| {at0:.1e}, strictly increasing on 81 points in [-10, 10]: {monotone}, \
             gamma(30) = {top:.6}, gamma(-30) = {bottom:.2e}, reflection {refl:.1e}"
        ),
    )
}

fn h0_reduction() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in [2usize, 3] {
        let symbols: [SymbolSpec; 3] = if n == 2 {
            [sym("1/(1+h1)"), sym("exp(-h1) * ind(h1 > 0.3)"), sym("atan(h1)")]
        } else {
            [
                sym("1/(1+h1+h2)"),
                sym("ind(h1 < 1) * ind(h2 > 0.5)"),
                sym("h1/(1+h1+2*h2)"),
            ]
        };
        for f in &symbols {
            for lam in [0.0, 1.0] {
                for p in MultiIndex::all_up_to(n - 1, 5) {
                    let a = gamma_qh_h0(f, lam, n, &p, &spec())?.value;
                    let b = gamma_qe(f, lam, n - 1, &p, &spec())?.value;
                    worst = worst.max((a - b).norm());
                }
            }
        }
    }
    outcome(worst < 1e-10, format!("max |qh_h0 - qe| {worst:.2e}"))
}

fn pde() -> Result<Outcome> {
    let mut rng = common::rng(42);
    let (mut qe, mut qh, mut fw): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for k in 0..100 {
        let n = 1 + k % 3;
        let p = MultiIndex::new((0..n).map(|_| rng.random_range(0..6)).collect());
        let h: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..4.0)).collect();
        qe = qe.max(pde_residual_qe(&p, &h, None)?);
    }
    for k in 0..100 {
        let n = 1 + k % 3;
        let p = MultiIndex::new((0..n - 1).map(|_| rng.random_range(0..6)).collect());
        let mut h: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.05..4.0)).collect();
        h.push(rng.random_range(-4.0..4.0));
        qh = qh.max(pde_residual_qh(
            &p,
            rng.random_range(-3.0..3.0),
            rng.random_range(-0.9..2.0),
            &h,
            None,
        )?);
    }
    for k in 0..1000 {
        let n = 1 + k % 3;
        let p = MultiIndex::new((0..n - 1).map(|_| rng.random_range(0..4)).collect());
        let h: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.01..3.0)).collect();
        let (f, sq) = f_weight(
            &p,
            rng.random_range(-3.0..3.0),
            rng.random_range(-0.9..2.0),
            &h,
            rng.random_range(-10.0..10.0),
        )?;
        fw = fw.max((sq - f.norm_sqr()).abs() / sq.max(1.0));
    }
    outcome(
        qe < 1e-12 && qh < 1e-12 && fw < 1e-12,
        format!("qe residual {qe:.1e}, qh residual {qh:.1e}, |F|^2 identity {fw:.1e}"),
    )
}

fn normalization() -> Result<Outcome> {
    let mut spread: f64 = 0.0;
    let mut report = Vec::new();
    for (n, lam) in [(1usize, 0.0), (2, 0.5), (3, 1.0)] {
        let vals: Vec<f64> = (0..=6u32)
            .map(|k| {
                let mut e = vec![0; n];
                e[0] = k;
                bargmann_normalization_check(&MultiIndex::new(e), lam, n, &spec()).map(|r| r.measured)
            })
            .collect::<Result<_>>()?;
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        spread = spread.max((hi - lo) / lo);
        report.push(format!("n={n} lambda={lam}: measured constant {:.12}", vals[0]));
    }
    let qh: Vec<f64> = (0..=6u32)
        .map(|k| bargmann_normalization_check_qh(&mi(&[k]), 0.4, 0.5, 2, &spec()).map(|r| r.measured))
        .collect::<Result<_>>()?;
    let lo = qh.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = qh.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    spread = spread.max((hi - lo) / lo);
    report.push(format!("qh n=2 lambda=0.5: measured constant {:.12}", qh[0]));
    outcome(spread < 1e-8, format!("spread {spread:.1e}; {}", report.join("; ")))
}

type Criterion = (&'static str, fn() -> Result<Outcome>);

fn main() {
    let criteria: [Criterion; 10] = [
        ("constant symbol normalisation", constant_symbol),
        ("closed-form quasi-elliptic family", closed_form_qe),
        ("brute-force diagonalisation", diagonalization),
        ("Hamiltonian identity", hamiltonian),
        ("moment coordinates", coordinates),
        ("Romanovski-Routh total mass", romanovski),
        ("hyperbolic multiplier", hyperbolic),
        ("h0 multipliers equal lower-dimensional qe", h0_reduction),
        ("holomorphy system residuals", pde),
        ("Bargmann normalisation report", normalization),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!("{} {:>2} {name}: {detail}", if pass { "PASS" } else { "FAIL" }, k + 1);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
