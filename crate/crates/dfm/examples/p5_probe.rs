use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let classes = dfm::moments::catalog(5).unwrap();
    println!(
        "p=5 catalog (classes, orbits, counters): {} classes in {:?}",
        classes.len(),
        t0.elapsed()
    );
    let qp = dfm::moments::ssac_central_moment(5).unwrap();
    println!(
        "fifth moment: degree {}, period {} ({:?})",
        qp.degree(),
        qp.period(),
        t0.elapsed()
    );
    for ell in 1..=14u32 {
        let oracle =
            dfm::seqstat::exhaustive_central_moment(5, ell, dfm::seqstat::Statistic::Ssac)
                .unwrap();
        assert_eq!(qp.eval_u64(ell as u64), oracle, "ell={ell}");
    }
    println!("fifth moment matches the exhaustive oracle for ell <= 14");
}
