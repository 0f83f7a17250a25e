use std::sync::Once;

use legcost::legcost as module;
use pyo3::prelude::*;

static INIT: Once = Once::new();

fn run(code: &std::ffi::CStr) {
    INIT.call_once(|| pyo3::append_to_inittab!(module));
    Python::attach(|py| {
        if let Err(e) = py.run(code, None, None) {
            e.print(py);
            panic!("python snippet failed");
        }
    });
}

#[test]
fn front_round_trip_and_invariants() {
    run(c"
import legcost
u = legcost.Front.builtin('unknot')
assert (u.tb, u.rot) == (-1, 0)
s = u.stabilize('-')
assert (s.tb, s.rot) == (-2, -1)
assert legcost.Front(str(s)).invariants() == s.invariants()
r = s.reverse()
assert r.reversed and r.rot == 1
assert 'reversed' in str(r)
");
}

#[test]
fn search_results_are_dicts() {
    run(c"
import legcost
u = legcost.Front.builtin('unknot')
v = legcost.lr_equivalent(u, u)
assert v['status'] == 'equivalent'
c = legcost.cost_search(u, u.stabilize('+'), max_cost=3)
assert c['kind'] == 'Exact' and c['value'] == 1
try:
    legcost.lr_equivalent(u, u, max_width=0)
except ValueError:
    pass
else:
    raise AssertionError('zero width accepted')
");
}

#[test]
fn graphs_and_types() {
    run(c"
import json, legcost
d = legcost.knot_type('right_trefoil')
assert d['name'] == 'torus(2,3)' and d['peaks'] == [[1, 0]]
again = legcost.knot_type(json.dumps(d))
assert again == d
g = legcost.cost_graph('right_trefoil', -1)
assert len(g['vertices']) == 1 + 2 + 3
rep = legcost.verify_graph('unknot', -5)
assert rep['violations'] == [] and rep['components'] == 1
try:
    legcost.cost_graph('left_trefoil', -3, 'png')
except ValueError:
    pass
else:
    raise AssertionError('bad format accepted')
s = legcost.sum_type('right_trefoil', 'right_trefoil')
assert s['peaks'] == [[3, 0]]
");
}
