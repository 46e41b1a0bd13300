"""Fully dynamic approximate distance oracles."""
from .decremental import (ChangeKind, ChangeRecord, DecrementalConfig, DecrementalHubLabeling,
                          current_hub_set, decr_delete, decr_query, init_decremental, recourse)
from .errors import *  # noqa: F401,F403
from .exact import ExactOracle, apsp, sssp
from .graph import (Delete, DynamicGraph, Insert, Query, TraceConfig, generate_trace, parse_trace,
                    serialize_trace)
from .kernels import BACKEND
from .reduction import ComposedOracle, ReductionParams, new_composed, scaled_a_factory
from .tower import TowerConfig, build_tower, preset_constant_stretch, preset_loglog
from .tz import Hierarchy, HubLabeling, StaticTZOracle, build_labeling, hub_query, sample_hierarchy

__version__ = "0.1.0"
