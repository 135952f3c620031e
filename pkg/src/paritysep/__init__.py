"""Parity games solved through separating automata.

The library covers the full pipeline between three views of one
combinatorial object: universal ordered trees, the safety automata that
separate decisively-even play encodings from limsup-odd words, and the
progress measures that witness winning strategies.  On top sit solvers
(recursive oracle, safety-game reduction, lifting) and a lower-bound lab
that extracts the universal tree hiding inside any strong separator.
"""

__version__ = "0.1.0"

from .games import (
    EVEN,
    ODD,
    GameGraph,
    Lasso,
    ParityGame,
    classify_lasso,
    game_from_json,
    game_to_json,
    is_even_graph,
    parse_pgsolver,
    random_game,
    sample_even_lassos,
    sample_even_path_words,
    strategy_subgraph,
)
from .trees import (
    FullTreeIndex,
    LeafIndex,
    SizeBounds,
    embeds,
    enumerate_trees,
    full_tree,
    g_value,
    is_universal,
    leaf_count,
    leaf_query,
    leaves,
    lex_compare,
    min_universal_size,
    size_bounds,
    succinct_tree,
    tree_from_json,
    tree_to_json,
    truncate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
