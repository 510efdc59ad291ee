fn main() {
    for s in sphlab::suites::SUITES {
        let t = std::time::Instant::now();
        let rep = sphlab::suites::run_suite(s, 7).unwrap();
        println!("== {s} passed={} ({:.1}s)", rep.passed, t.elapsed().as_secs_f64());
        for c in rep.checks { println!("  [{}] {} value={:.4e} bound={:.3e} {}", if c.passed {"ok"} else {"FAIL"}, c.name, c.value, c.bound, c.detail); }
    }
}
