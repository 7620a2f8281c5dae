import pytest

from netccs import Marking, PetriNet

CHOICE_SYNC_EDGES = [
    ("p3", "t1"),
    ("p2", "t2"),
    ("p3", "t2"),
    ("t2", "p1"),
    ("p3", "t3"),
    ("t3", "p1"),
    ("t3", "p2"),
]


@pytest.fixture
def choice_sync_net():
    """Three-place net: t1:a from p3; t2:tau from p2,p3 to p1; t3:b from p3 to p1,p2."""
    net = PetriNet(
        places=("p1", "p2", "p3"),
        transitions=("t1", "t2", "t3"),
        edges=frozenset(CHOICE_SYNC_EDGES),
        labelling={"t1": "a", "t2": "tau", "t3": "b"},
    )
    return net, Marking({"p1": 1, "p3": 2})


@pytest.fixture
def partial_overlap_net():
    """p1 feeds t1 only while p2 feeds t1 and t2: postsets partially overlap."""
    net = PetriNet(
        places=("p1", "p2", "p3"),
        transitions=("t1", "t2", "t3"),
        edges=frozenset([("p1", "t1"), ("p2", "t1"), ("p2", "t2"), ("p3", "t3")]),
        labelling={"t1": "a", "t2": "b", "t3": "c"},
    )
    return net


@pytest.fixture
def shared_postset_net():
    """p1 and p2 share the postset {t1, t2}; p3 feeds t3 alone."""
    net = PetriNet(
        places=("p1", "p2", "p3"),
        transitions=("t1", "t2", "t3"),
        edges=frozenset(
            [("p1", "t1"), ("p1", "t2"), ("p2", "t1"), ("p2", "t2"), ("t1", "p3"), ("p3", "t3")]
        ),
        labelling={"t1": "a", "t2": "b", "t3": "c"},
    )
    return net, Marking({"p1": 1, "p2": 1, "p3": 1})


@pytest.fixture
def generator_net():
    """Single token generator: t1 labelled b feeding p1, empty initial marking."""
    net = PetriNet(
        places=("p1",),
        transitions=("t1",),
        edges=frozenset([("t1", "p1")]),
        labelling={"t1": "b"},
    )
    return net, Marking({})


@pytest.fixture
def join3_net():
    """Three-input join with tokens only in p2 and p3; deadlocked until rewritten."""
    net = PetriNet(
        places=("p1", "p2", "p3"),
        transitions=("t1",),
        edges=frozenset([("p1", "t1"), ("p2", "t1"), ("p3", "t1")]),
        labelling={"t1": "a"},
    )
    return net, Marking({"p2": 1, "p3": 1})
