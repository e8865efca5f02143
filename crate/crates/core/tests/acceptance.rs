//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;

use partitions::asymptotics::{l_n, relative_error_table, tail_ratio_bound, PAPER_TABLE_NS};
use partitions::bessel::{bessel_i_3_2_closed, bessel_i_series, BesselOrder};
use partitions::dedekind::{a_k, dedekind_reciprocity_defect, dedekind_sum};
use partitions::eta::{eta_samples, f_transform_samples, verify_eta, verify_f_transform};
use partitions::exact::p_oracle_dp_table;
use partitions::farey::{
    chord_bounds_check, farey, farey_neighbors_check, ford_circle, path, path_chords, Fraction,
};
use partitions::precision::relative_difference;
use partitions::series::r_k;
use partitions::{p_exact, p_series, PartitionCache, PrecisionContext, SeriesOptions};

type Outcome = Result<String, String>;

const TABLE_P: [(u64, &str); 17] = [
    (10, "42"),
    (50, "204226"),
    (100, "190569292"),
    (200, "3972999029388"),
    (500, "2300165032574323995027"),
    (1000, "24061467864032622473692149727991"),
    (2000, "4720819175619413888601432406799959512200344166"),
    (3000, "496025142797537184410324879054927095334462742231683423624"),
    (4000, "1024150064776551375119256307915896842122498030313150910234889093895"),
    (5000, "169820168825442121851975101689306431361757683049829233322203824652329144349"),
    (6000, "4671727531970209092971024643973690643364629153270037033856605528925072405349246129"),
    (7000, "32856930803440615786280925635924166861950151574532240659699032157432236394374450791229199"),
    (8000, "78360264351568349490593145013364599719010769352985864331118600209417827764524450990388402844164"),
    (9000, "77133638117808884907320791427403134961639798322072034262647713694605367979684296948790335590435626459"),
    (10000, "36167251325636293988820471890953695495016030339315650422081868605887952568754066420592310556052906916435144"),
    (12000, "1294107667757322067493842620367467386268131006205640080126511905905017060058126929125027069901623662251809128853180610"),
    (15000, "262633793640379084137102319165906698802932055965437249406588587971375120081791056718639088570913175942816125969709246029351672130266"),
];

const TABLE_EPS: [(u64, f64); 17] = [
    (10, -14.53),
    (50, -6.54),
    (100, -4.57),
    (200, -3.2),
    (500, -2.01),
    (1000, -1.42),
    (2000, -1.0),
    (3000, -0.81),
    (4000, -0.7),
    (5000, -0.63),
    (6000, -0.57),
    (7000, -0.53),
    (8000, -0.5),
    (9000, -0.47),
    (10000, -0.44),
    (12000, -0.41),
    (15000, -0.36),
];

fn ctx128() -> PrecisionContext {
    PrecisionContext::new(128).unwrap()
}

fn within(elapsed: Duration, budget_secs: u64, what: &str) -> Result<(), String> {
    if elapsed > Duration::from_secs(budget_secs) {
        return Err(format!("{what} took {elapsed:.1?}, budget {budget_secs}s"));
    }
    Ok(())
}

fn exact_table() -> Outcome {
    let start = Instant::now();
    let mut cache = PartitionCache::new();
    for (n, expected) in TABLE_P {
        let got = p_exact(n, &mut cache).to_string();
        if got != expected {
            return Err(format!("p({n}) = {got}, expected {expected}"));
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, 30, "table")?;
    Ok(format!("17 values digit-for-digit in {elapsed:.2?}"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let oracle = p_oracle_dp_table(2000).map_err(|e| e.to_string())?;
    let mut cache = PartitionCache::new();
    cache.extend_to(2000);
    for (n, want) in oracle.iter().enumerate() {
        let got = p_exact(n as u64, &mut cache);
        if &got != want {
            return Err(format!("n = {n}: recurrence {got}, oracle {want}"));
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, 60, "oracle comparison")?;
    Ok(format!("n = 0..=2000 agree in {elapsed:.2?}"))
}

fn rademacher_certification() -> Outcome {
    let start = Instant::now();
    let mut cache = PartitionCache::new();
    let ns: Vec<u64> = (1..=50).chain([100, 200, 500, 1000, 2000]).collect();
    let mut worst_gap = 0.0f64;
    for &n in &ns {
        let report = p_series(n, SeriesOptions::default()).map_err(|e| e.to_string())?;
        let exact = p_exact(n, &mut cache);
        if report.rounded != exact {
            return Err(format!(
                "n = {n}: series {} vs exact {exact}",
                report.rounded
            ));
        }
        let gap = report.gap.to_f64();
        if !(gap < 0.25) {
            return Err(format!("n = {n}: gap {gap}"));
        }
        worst_gap = worst_gap.max(gap);
    }
    let elapsed = start.elapsed();
    within(elapsed, 60, "certification")?;
    Ok(format!(
        "{} values certified, max gap {worst_gap:.3e}, {elapsed:.2?}",
        ns.len()
    ))
}

fn asymptotic_errors() -> Outcome {
    let mut cache = PartitionCache::new();
    let rows =
        relative_error_table(&PAPER_TABLE_NS, &mut cache, ctx128()).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (row, (n, expected)) in rows.iter().zip(TABLE_EPS) {
        assert_eq!(row.n, n);
        let diff = (row.eps_rounded() - expected).abs();
        if diff > 0.01 + 1e-9 {
            return Err(format!(
                "n = {n}: eps {} (rounded {}), expected {expected}",
                row.eps_percent.to_f64(),
                row.eps_rounded()
            ));
        }
        worst = worst.max(diff);
    }
    Ok(format!("17 rows within 0.01 (max deviation {worst:.3})"))
}

fn dedekind_suite() -> Outcome {
    let mut pairs = 0;
    for k in 2..=50u64 {
        for h in 1..k {
            if h.gcd(&k) != 1 {
                continue;
            }
            let defect = dedekind_reciprocity_defect(h, k).map_err(|e| e.to_string())?;
            if defect != num_rational::BigRational::from_integer(0.into()) {
                return Err(format!("reciprocity defect {defect} at ({h}, {k})"));
            }
            let s = dedekind_sum(h as i64, k).unwrap();
            let s_neg = dedekind_sum((k - h) as i64, k).unwrap();
            if s_neg != -s {
                return Err(format!("s({}, {k}) != -s({h}, {k})", k - h));
            }
            pairs += 1;
        }
    }
    let ctx = ctx128();
    let slack = ctx.f64(1e-30);
    for k in 1..=100u64 {
        for n in 1..=50u64 {
            let v = a_k(k, n, ctx).map_err(|e| e.to_string())?.value;
            if v.abs() > ctx.uint(k) + &slack {
                return Err(format!("|A_{k}({n})| = {} > {k}", v.abs().to_f64()));
            }
        }
    }
    Ok(format!("{pairs} coprime pairs exact; 5000 A_k(n) bounded"))
}

fn phi(n: u64) -> u64 {
    (1..=n).filter(|h| h.gcd(&n) == 1).count() as u64
}

fn farey_ford_suite() -> Outcome {
    let mut prev_len = 0u64;
    for order in 1..=100u64 {
        let seq = farey(order).map_err(|e| e.to_string())?;
        let mut brute: Vec<Fraction> = (1..=order)
            .flat_map(|k| (0..=k).map(move |h| (h, k)))
            .filter(|&(h, k)| h.gcd(&k) == 1)
            .map(|(h, k)| Fraction { h, k })
            .collect();
        brute.sort_by(|a, b| (a.h * b.k).cmp(&(b.h * a.k)));
        if seq.entries != brute {
            return Err(format!("F_{order} differs from enumeration"));
        }
        if !farey_neighbors_check(&seq.entries) {
            return Err(format!("determinant law fails in F_{order}"));
        }
        let len = seq.entries.len() as u64;
        let expected = if order == 1 { 2 } else { prev_len + phi(order) };
        if len != expected {
            return Err(format!("|F_{order}| = {len}, expected {expected}"));
        }
        prev_len = len;
    }
    let mut points = 0;
    for order in 1..=30u64 {
        let entries = farey(order).unwrap().entries;
        for (j, arc) in path(order).map_err(|e| e.to_string())?.iter().enumerate() {
            let own = ford_circle(arc.frac);
            let left = ford_circle(entries[j]);
            let right = if j + 2 < entries.len() {
                ford_circle(entries[j + 2])
            } else {
                ford_circle(Fraction::extended(order + 1, order).unwrap())
            };
            let ok = own.contains_on_boundary(&arc.alpha1)
                && left.contains_on_boundary(&arc.alpha1)
                && own.contains_on_boundary(&arc.alpha2)
                && right.contains_on_boundary(&arc.alpha2);
            if !ok {
                return Err(format!(
                    "tangency point off circle at {} in order {order}",
                    arc.frac
                ));
            }
            points += 2;
        }
    }
    let mut chords = 0;
    for order in 1..=50u64 {
        for chord in path_chords(order).map_err(|e| e.to_string())? {
            if !chord_bounds_check(&chord) {
                return Err(format!(
                    "chord bound fails for k = {} in order {order}",
                    chord.k
                ));
            }
            chords += 1;
        }
    }
    Ok(format!(
        "F_1..F_100 exact; {points} tangency points on circles; {chords} chords bounded"
    ))
}

fn bessel_suite() -> Outcome {
    let ctx = ctx128();
    let mut worst = 0.0f64;
    for x in ["0.1", "0.5", "1", "2", "5", "10", "30"] {
        let x_val = ctx.parse_decimal(x).unwrap();
        let s =
            bessel_i_series(BesselOrder::THREE_HALVES, &x_val, ctx).map_err(|e| e.to_string())?;
        let c = bessel_i_3_2_closed(&x_val, ctx).map_err(|e| e.to_string())?;
        let rel = relative_difference(&s, &c).to_f64();
        if rel > 1e-12 {
            return Err(format!("x = {x}: relative difference {rel:e}"));
        }
        worst = worst.max(rel);
    }
    let at_one = bessel_i_series(BesselOrder::THREE_HALVES, &ctx.one(), ctx).unwrap();
    let oracle = (ctx.int(2) / ctx.pi()).sqrt() * ctx.int(-1).exp();
    let err = (at_one - oracle).abs().to_f64();
    if err > 1e-12 {
        return Err(format!("I(1) off by {err:e}"));
    }
    Ok(format!(
        "max relative difference {worst:.2e}; I(1) error {err:.2e}"
    ))
}

fn eta_suite() -> Outcome {
    let ctx = ctx128();
    let mut worst = 0.0f64;
    for (m, tau) in eta_samples(24) {
        let report = verify_eta(m, &tau.to_complex(ctx), ctx).map_err(|e| e.to_string())?;
        let r = report.residual.to_f64();
        if !(r < 1e-10) {
            return Err(format!("eta residual {r:e} at {m:?}"));
        }
        worst = worst.max(r);
    }
    for (h, k, z) in f_transform_samples(24) {
        let report =
            verify_f_transform(h, k, &z.to_complex(ctx), ctx).map_err(|e| e.to_string())?;
        let r = report.residual.to_f64();
        if !(r < 1e-10) {
            return Err(format!("F residual {r:e} at h = {h}, k = {k}"));
        }
        worst = worst.max(r);
    }
    Ok(format!("24 + 24 cases, max residual {worst:.2e}"))
}

fn tail_behavior() -> Outcome {
    let mut cache = PartitionCache::new();
    for n in 10..=200u64 {
        let ctx = PrecisionContext::new(partitions::series::working_bits(n)).unwrap();
        let p: BigUint = p_exact(n, &mut cache).into_biguint();
        let r1 = r_k(n, 1, ctx).map_err(|e| e.to_string())?.r_k;
        let ratio = (ctx.biguint(&p) - r1).abs() / l_n(n, ctx).unwrap();
        let bound = tail_ratio_bound(n, ctx).unwrap();
        if ratio > bound {
            return Err(format!(
                "n = {n}: |S/L| = {:e} exceeds bound {:e}",
                ratio.to_f64(),
                bound.to_f64()
            ));
        }
    }
    let n = 10_000;
    let ctx = PrecisionContext::new(partitions::series::working_bits(n)).unwrap();
    let r1 = r_k(n, 1, ctx).unwrap().r_k;
    let dev = (r1 / l_n(n, ctx).unwrap() - ctx.one()).abs().to_f64();
    if !(dev < 1e-2) {
        return Err(format!("|R_1/L - 1| = {dev:e} at n = 10^4"));
    }
    Ok(format!(
        "bound holds on 10..=200; |R_1/L - 1| = {dev:.3e} at 10^4"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("exact engine matches the published table", exact_table),
        (
            "recurrence equals the coin-counting oracle",
            oracle_equivalence,
        ),
        ("series rounding is certified", rademacher_certification),
        ("relative error of the leading term", asymptotic_errors),
        ("Dedekind sums and A_k bounds", dedekind_suite),
        ("Farey sequences, Ford circles and chords", farey_ford_suite),
        ("Bessel series against the closed form", bessel_suite),
        ("eta and F transformation residuals", eta_suite),
        ("tail of the series relative to L(n)", tail_behavior),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({detail})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
