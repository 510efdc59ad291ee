use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module(code: &std::ffi::CStr) {
    Python::attach(|py| {
        let m = pyo3::wrap_pymodule!(sphlab_py::sphlab_py)(py);
        let globals = PyDict::new(py);
        globals.set_item("sl", m).unwrap();
        if let Err(e) = py.run(code, Some(&globals), None) {
            e.display(py);
            panic!("python assertion failed");
        }
    });
}

#[test]
fn fields_and_averages() {
    with_module(
        c"
import math
g = sl.Field.gaussian([0.0, 0.0], 1.0)
assert g.dim == 2
assert abs(sl.spherical_average(g, [0.0, 0.0], 1.3) - math.exp(-1.69)) < 1e-12
assert abs(sl.bilinear_average(g, g, [0.0, 0.0], 1.0) - math.exp(-1.0)) < 1e-10
b = sl.Field.annulus(3, 1.0, 2.0)
assert b([0.0, 0.0, 1.5]) == 1.0 and b([0.0, 0.0, 0.5]) == 0.0
try:
    sl.Field.gaussian([], 1.0)
    raise AssertionError('empty center accepted')
except ValueError:
    pass
",
    );
}

#[test]
fn regions_and_table() {
    with_module(
        c"
rec = sl.classify('linearAr', 2, exponents=['4/3', '4'], r='2')
assert rec['verdict'] == 'restricted-weak', rec
assert sl.vertex('linearAr', 2, 'Q', r='2') == ['3/4', '1/4']
assert sl.classify('linearAr', 2, coords=['3/4', '1/4'], r='2')['verdict'] == rec['verdict']
gaps = sl.necessary_gap('linearAr', 2, coords=['3/4', '1/4'], r='2')
assert all(g['satisfied'] for g in gaps)
assert all(r['degenerate'] or r['matches'] for r in sl.reproduce_table(2, '2'))
try:
    sl.classify('noSuch', 2, coords=['1/2', '1/2'])
    raise AssertionError('unknown theorem accepted')
except ValueError:
    pass
",
    );
}

#[test]
fn suites_are_listed_and_run() {
    with_module(
        c"
assert 'slicing' in sl.suites()
rep = sl.run_suite('regions-golden')
assert rep['passed'] and rep['checks']
",
    );
}
