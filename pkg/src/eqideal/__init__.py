"""Equations over finitely generated subgroups of free groups.

Given H <= F_n and targets g_1..g_m, the package computes the ideal of
equations (the kernel of H * <x_1..x_m> -> F_n, x_i -> g_i): normal
generators via Stallings foldings, minimum equation degree with an explicit
witness, fixed-degree existence, and the full degree set.
"""

from .words import (
    Alphabet,
    FreeWord,
    WordError,
    ambient_word,
    cyclic_reduce,
    degree,
    equation_word,
    evaluate,
    multi_degree,
    parse_word,
    word_to_str,
)
from .graphs import (
    Edge,
    GraphBuilder,
    GraphError,
    GraphPath,
    LabeledGraph,
    ReductionProcess,
    SpanningTree,
    core,
    fundamental_basis,
    label_process,
    pointed_core,
    reduce_path,
    spanning_tree,
    wedge_of_words,
)
from .folding import FoldStep, FoldingTrace, contains, fold, rank, subgroup_graph
from .ideal import (
    IdealPresentation,
    Petal,
    Problem,
    WedgeData,
    build_G,
    cyclic_generator,
    depends,
    equation_to_path,
    loop_degree,
    normal_generators,
    parity_class,
    path_to_equation,
    problem_from_strings,
)
from .rational import CapExceeded
from .degrees import (
    DegreeSetDescriptor,
    SignPattern,
    degree_exists,
    degree_set,
    equations_of_degree,
    min_degree,
    multi_degree_exists,
)
from .moves import (
    InsertionSpec,
    ParallelCouple,
    apply_insertions,
    cancel,
    cancel_inverse_spec,
    consolidate,
    find_parallel_couples,
    insert,
    insertion_words,
    is_degree_preserving,
)
from .oracle import KernelLoop, enumerate_kernel_loops, naive_min_degree

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "CapExceeded",
    "DegreeSetDescriptor",
    "Edge",
    "FoldStep",
    "FoldingTrace",
    "FreeWord",
    "GraphBuilder",
    "GraphError",
    "GraphPath",
    "IdealPresentation",
    "InsertionSpec",
    "KernelLoop",
    "LabeledGraph",
    "ParallelCouple",
    "Petal",
    "Problem",
    "ReductionProcess",
    "SignPattern",
    "SpanningTree",
    "WedgeData",
    "WordError",
    "ambient_word",
    "apply_insertions",
    "build_G",
    "cancel",
    "cancel_inverse_spec",
    "consolidate",
    "contains",
    "core",
    "cyclic_generator",
    "cyclic_reduce",
    "degree",
    "degree_exists",
    "degree_set",
    "depends",
    "enumerate_kernel_loops",
    "equation_to_path",
    "equation_word",
    "equations_of_degree",
    "evaluate",
    "find_parallel_couples",
    "fold",
    "fundamental_basis",
    "insert",
    "insertion_words",
    "is_degree_preserving",
    "label_process",
    "loop_degree",
    "min_degree",
    "multi_degree",
    "multi_degree_exists",
    "naive_min_degree",
    "normal_generators",
    "parity_class",
    "parse_word",
    "path_to_equation",
    "pointed_core",
    "problem_from_strings",
    "rank",
    "reduce_path",
    "spanning_tree",
    "subgroup_graph",
    "wedge_of_words",
    "word_to_str",
]
