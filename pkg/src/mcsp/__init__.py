"""Multi-constraint shortest path queries over skyline 2-hop labels.

Tree index: tree decomposition with skyline shortcuts and labels.
Forest index: partitioned variant with inner trees and a boundary tree.
"""
from .errors import (ArithmeticOverflow, BadIndexFormat, BucketEmpty, EmptyGraph, EmptyHop,
                     InvalidProvenance, InvalidValue, InvalidVertex, MCSPError, MismatchedEdgeSet,
                     PreconditionViolated, TooLarge, VersionMismatch)
from .forest import ForestIndex
from .graph import Graph, QuerySpec, grid_graph, load_dimacs, random_road_graph, synthesize_costs
from .oracle import brute_force_skyline, mcsp_oracle, sky_dijkstra
from .partition import Partition, partition_graph
from .pruning import FULL, NONE, PruningConfig
from .serialize import load_index, save_index
from .skyline import PathSummary, SkylinePathSet, Stats
from .tree import TreeIndex

__version__ = "0.1.0"
