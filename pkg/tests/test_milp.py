import pytest

from dtorder.core.model import Instance, Task
from dtorder.logic.milp import build_milp, export_milp, solve_milp


def test_two_task_model_shape():
    instance = Instance((Task.of(0, 1, 2), Task.of(1, 2, 1)), 3)
    model = build_milp(instance)
    assert model.big_m == 6
    assert len(model.comm_start) == 2
    assert sorted(model.comm_before) == [(0, 1), (1, 0)]
    names = {v.name for v in model.problem.variables()}
    assert {"l", "s_0", "e_1", "sp_0", "ep_1", "a_0_1", "b_1_0", "c_0_1"} <= names


def test_export_is_lp_text(order_gap):
    text = export_milp(order_gap)
    lowered = text.lower()
    assert "minimize" in lowered
    assert "subject to" in lowered
    for name in ("memory_0", "link_0_1", "held_2_3", "a_5_4", "ep_3"):
        assert name in text


def test_both_big_m_lines_are_emitted_per_pair():
    model = build_milp(Instance((Task.of(0, 1, 2), Task.of(1, 2, 1)), 3))
    names = set(model.problem.constraints)
    for i, j in ((0, 1), (1, 0)):
        assert {f"link_{i}_{j}", f"link_swap_{i}_{j}", f"processor_{i}_{j}", f"processor_swap_{i}_{j}"} <= names


def test_single_task_model_has_no_pair_variables():
    text = export_milp(Instance((Task.of(0, 2, 3),), 2))
    assert "a_0" not in text
    assert "s_0" in text


def test_unbounded_capacity_drops_memory_rows():
    text = export_milp(Instance((Task.of(0, 1, 1), Task.of(1, 1, 1))))
    assert "memory_" not in text


@pytest.mark.integration
def test_cbc_solves_order_gap(order_gap):
    value = solve_milp(order_gap)
    if value is None:
        pytest.skip("CBC is not available")
    assert value == pytest.approx(22, abs=1e-4)


@pytest.mark.integration
def test_cbc_single_task_is_comm_plus_comp():
    value = solve_milp(Instance((Task.of(0, 2, 3),), 2))
    if value is None:
        pytest.skip("CBC is not available")
    assert value == pytest.approx(5, abs=1e-4)
