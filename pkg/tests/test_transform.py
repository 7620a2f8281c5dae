import random

import pytest

from netccs import (
    ExplorationLimits,
    InputError,
    Marking,
    PetriNet,
    PreconditionError,
    RewriteRecord,
    TransformTrace,
    build_net_lts,
    classify,
    group_reduce,
    group_reduce_step,
    has_divergent_path,
    reduce_preset_step,
    reduce_presets,
    strong_bisim,
    weak_bisim,
)

from gen import random_fcwf_net, random_group_choice_net


@pytest.fixture
def two_token_join():
    """Free-choice net with a binary visible join: p2, p3 -> t1."""
    net = PetriNet(
        places=("p1", "p2", "p3", "p4"),
        transitions=("t1", "t2"),
        edges=frozenset([("p2", "t1"), ("p3", "t1"), ("t1", "p4"), ("p1", "t2"), ("t2", "p2")]),
        labelling={"t1": "a", "t2": "b"},
    )
    return net, Marking({"p1": 1, "p3": 1})


def test_preset_step_shape(two_token_join):
    net, m0 = two_token_join
    out, m, record = reduce_preset_step(net, m0, "t1")
    assert record.pair == ("p2", "p3")
    assert record.fresh_transition == "_t1" and record.fresh_place == "_p1"
    assert {("p2", "_t1"), ("p3", "_t1"), ("_t1", "_p1"), ("_p1", "t1")} <= out.edges
    assert ("p2", "t1") not in out.edges and ("p3", "t1") not in out.edges
    assert out.label("_t1") == "tau"
    assert m.count("_p1") == 0
    assert out.preset("t1") == ("_p1",)


def test_preset_step_on_binary_tau_leaves_unary_preset():
    net = PetriNet(
        places=("p1", "p2"),
        transitions=("t1",),
        edges=frozenset([("p1", "t1"), ("p2", "t1")]),
        labelling={"t1": "tau"},
    )
    out, _, _ = reduce_preset_step(net, Marking({}), "t1")
    assert len(out.preset("t1")) == 1


def test_preset_step_preconditions(two_token_join):
    net, m0 = two_token_join
    with pytest.raises(PreconditionError):
        reduce_preset_step(net, m0, "t2")  # single ingoing edge
    with pytest.raises(InputError):
        reduce_preset_step(net, m0, "zz")
    with pytest.raises(InputError):
        reduce_preset_step(net, m0, "t1", pair=("p2", "p2"))


def test_reduce_presets_noop_on_ccs_net(choice_sync_net):
    net, m0 = choice_sync_net
    with pytest.warns(UserWarning):  # choice_sync_net is not free-choice, so force warns
        out, m, trace = reduce_presets(net, m0, force=True)
    assert out == net and m == m0 and len(trace) == 0


def test_reduce_presets_requires_free_choice(choice_sync_net):
    net, m0 = choice_sync_net
    with pytest.raises(PreconditionError):
        reduce_presets(net, m0)


def test_reduce_presets_step_count_for_k_join():
    for k in (2, 3, 4, 5):
        places = tuple(f"p{i}" for i in range(1, k + 1))
        net = PetriNet(
            places=places,
            transitions=("t1",),
            edges=frozenset((p, "t1") for p in places),
            labelling={"t1": "a"},
        )
        _, _, trace = reduce_presets(net, Marking({p: 1 for p in places}))
        assert len(trace) == k - 1


def test_reduce_presets_outputs_ccs_net_on_fcwf():
    rng = random.Random(31)
    for _ in range(25):
        net, m0 = random_fcwf_net(rng)
        out, m, trace = reduce_presets(net, m0)
        flags = classify(out)
        assert flags.is_ccs_net, flags.diagnostics
        assert flags.is_free_choice


def test_preset_step_preserves_free_choice_and_zero_preset_sets():
    rng = random.Random(37)
    checked = 0
    while checked < 15:
        net, m0 = random_fcwf_net(rng)
        joins = [t for t in net.transitions if len(net.preset(t)) >= 2]
        if not joins:
            continue
        checked += 1
        out, _, _ = reduce_preset_step(net, m0, joins[0])
        assert classify(out).is_free_choice
        zero_before = {t for t in net.transitions if not net.preset(t)}
        zero_after = {t for t in out.transitions if not out.preset(t)}
        assert zero_before == zero_after


def test_preset_step_weak_bisimilar_and_divergence_preserving():
    rng = random.Random(41)
    checked = 0
    while checked < 12:
        net, m0 = random_fcwf_net(rng)
        joins = [t for t in net.transitions if len(net.preset(t)) >= 2]
        if not joins:
            continue
        checked += 1
        out, m, _ = reduce_preset_step(net, m0, joins[0])
        before = build_net_lts(net, m0, ExplorationLimits(5000))
        after = build_net_lts(out, m, ExplorationLimits(5000))
        assert weak_bisim(before, after).verdict
        assert has_divergent_path(before) == has_divergent_path(after)


def test_strong_bisimilarity_can_fail_weak_holds(join3_net):
    net, m0 = join3_net
    out, m, _ = reduce_preset_step(net, m0, "t1", pair=("p2", "p3"))
    before, after = build_net_lts(net, m0), build_net_lts(out, m)
    assert not strong_bisim(before, after).verdict
    assert weak_bisim(before, after).verdict


def test_group_step_fig13_to_fig14_shape(shared_postset_net):
    net, m0 = shared_postset_net
    out, m, record = group_reduce_step(net, m0, "p1", "p2")
    assert record.fresh_transition == "_t1" and record.fresh_place == "_p1"
    assert set(out._post_of_place["p1"]) == {"_t1"}
    assert set(out._post_of_place["p2"]) == {"_t1"}
    assert set(out._post_of_place["_p1"]) == {"t1", "t2"}
    assert set(out._post_of_place["p3"]) == {"t3"}
    assert ("_t1", "_p1") in out.edges
    assert m.count("_p1") == 0


def test_group_step_singleton_postset_net_effect():
    net = PetriNet(
        places=("p1", "p2"),
        transitions=("t1",),
        edges=frozenset([("p1", "t1"), ("p2", "t1")]),
        labelling={"t1": "a"},
    )
    out, _, _ = group_reduce_step(net, Marking({}), "p1", "p2")
    assert out.preset("t1") == ("_p1",)


def test_group_step_preconditions(partial_overlap_net):
    with pytest.raises(PreconditionError):
        group_reduce_step(partial_overlap_net, Marking({}), "p1", "p2")  # unequal postsets
    net = PetriNet(("p1", "p2"), (), frozenset(), {})
    with pytest.raises(PreconditionError):
        group_reduce_step(net, Marking({}), "p1", "p2")  # empty postsets


def test_group_step_preserves_group_choice():
    rng = random.Random(43)
    checked = 0
    while checked < 15:
        net, m0, _ = random_group_choice_net(rng)
        pairs = [
            (p, q)
            for i, p in enumerate(net.places)
            for q in net.places[i + 1 :]
            if net._post_of_place[p] and net._post_of_place[p] == net._post_of_place[q]
        ]
        if not pairs:
            continue
        checked += 1
        out, _, _ = group_reduce_step(net, m0, *pairs[0])
        assert classify(out).is_group_choice


def test_group_reduce_outputs_2tau(shared_postset_net):
    net, m0 = shared_postset_net
    out, m, trace = group_reduce(net, m0)
    assert classify(out).is_2tau_sync
    assert len(trace) >= 1
    before, after = build_net_lts(net, m0), build_net_lts(out, m)
    assert weak_bisim(before, after).verdict


def test_group_reduce_noop_on_2tau(generator_net):
    net, m0 = generator_net
    out, m, trace = group_reduce(net, m0)
    assert out == net and len(trace) == 0


def test_group_reduce_requires_group_choice(partial_overlap_net):
    with pytest.raises(PreconditionError):
        group_reduce(partial_overlap_net, Marking({}))


def test_forced_run_warns(choice_sync_net):
    net, m0 = choice_sync_net
    with pytest.warns(UserWarning):
        reduce_presets(net, m0, force=True)


def test_size_bound_and_step_cap():
    rng = random.Random(47)
    for _ in range(20):
        net, m0 = random_fcwf_net(rng)
        out, _, trace = reduce_presets(net, m0)
        assert out.size() <= net.size() + 4 * len(trace)
        assert len(trace) <= len(net.edges)
        net2, m2, _ = random_group_choice_net(rng)
        out2, _, trace2 = group_reduce(net2, m2)
        assert out2.size() <= net2.size() + 4 * len(trace2)
        assert len(trace2) <= len(net2.edges)


def test_seeded_policy_is_deterministic_and_correct():
    rng = random.Random(53)
    net, m0 = random_fcwf_net(rng)
    a = reduce_presets(net, m0, seed=99)
    b = reduce_presets(net, m0, seed=99)
    assert a[0] == b[0] and list(a[2]) == list(b[2])
    for seed in (1, 2, 3):
        out, m, _ = reduce_presets(net, m0, seed=seed)
        assert classify(out).is_ccs_net
        before = build_net_lts(net, m0, ExplorationLimits(5000))
        after = build_net_lts(out, m, ExplorationLimits(5000))
        assert weak_bisim(before, after).verdict


def test_trace_fresh_ids_unique():
    with pytest.raises(InputError):
        TransformTrace(
            (
                RewriteRecord("t1", ("a", "b"), "_t1", "_p1"),
                RewriteRecord("t2", ("a", "b"), "_t1", "_p2"),
            )
        )
