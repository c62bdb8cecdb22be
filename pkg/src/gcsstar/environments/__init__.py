from .fixtures import (
    DominationScenario,
    make_domination_fixtures,
    make_fig3_counterexample,
    make_stepping_stones,
    make_stones4,
    polygon_to_hpolyhedron,
    random_domination_instance,
    random_explicit_problem,
)
from .pushing import (
    BodySpec,
    ContactModeKey,
    PushingGcs,
    PushingModel,
    make_pushing_demo,
    make_pushing_problem,
    pushing_edge,
    pushing_successors,
    pushing_vertex_set,
)

__all__ = [
    "BodySpec",
    "ContactModeKey",
    "DominationScenario",
    "PushingGcs",
    "PushingModel",
    "make_domination_fixtures",
    "make_fig3_counterexample",
    "make_pushing_demo",
    "make_pushing_problem",
    "make_stepping_stones",
    "make_stones4",
    "polygon_to_hpolyhedron",
    "pushing_edge",
    "pushing_successors",
    "pushing_vertex_set",
    "random_domination_instance",
    "random_explicit_problem",
]
