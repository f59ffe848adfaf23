"""Entity integrity with key sets over relations with missing values.

A key set is a non-empty collection of keys (attribute sets); a relation
satisfies it when every pair of distinct rows is both total and distinct
on at least one key. The package validates relations against key sets,
decides implication between families of key sets, checks derivations in
the sound and complete rule system (Upward closure, Refinement,
Composition), generates Armstrong relations for the unary fragment, and
benchmarks the validation algorithms.
"""

from .armstrong import (
    AntiKeyReport,
    Hypergraph,
    anti_keys,
    generate_armstrong,
    is_armstrong_unary,
    minimal_transversals,
    size_bounds,
)
from .bench import (
    BenchReport,
    GeneratorSpec,
    gen_random_keyset,
    gen_sequential_keysets,
    run_bench,
    synthetic_relation,
    violation_percentage,
)
from .core import (
    AttrSet,
    KeySet,
    KeySetFamily,
    ParseError,
    Relation,
    Row,
    Schema,
    format_attr_set,
    format_keyset,
    format_schema,
    is_x_total,
    pair_separated_by,
    pair_violates,
    parse_attr_set,
    parse_keyset,
    parse_keyset_lines,
    parse_schema,
)
from .implication import (
    ChoiceProductTooLarge,
    CnfFormula,
    CounterexampleWitness,
    Decision,
    ImplicationInstance,
    build_counterexample,
    from_3sat,
    implies,
    implies_bruteforce,
    implies_unary,
    parse_dimacs,
    satisfiable,
)
from .inference import (
    Derivation,
    DerivationStep,
    RuleError,
    apply_composition,
    apply_nary_composition,
    apply_refinement,
    apply_upward_closure,
    check_derivation,
    derive_keyset,
    first_invalid_step,
    format_derivation,
    parse_derivation,
    simulate_nary,
)
from .ingest import DatasetStats, IngestConfig, IngestError, dataset_stats, load_csv, write_csv
from .validation import (
    BlockSet,
    block_trace,
    satisfies,
    violating_blocks,
    violating_tuples_naive,
)

__version__ = "0.1.0"

__all__ = [
    "AntiKeyReport",
    "AttrSet",
    "BenchReport",
    "BlockSet",
    "ChoiceProductTooLarge",
    "CnfFormula",
    "CounterexampleWitness",
    "DatasetStats",
    "Decision",
    "Derivation",
    "DerivationStep",
    "GeneratorSpec",
    "Hypergraph",
    "ImplicationInstance",
    "IngestConfig",
    "IngestError",
    "KeySet",
    "KeySetFamily",
    "ParseError",
    "Relation",
    "Row",
    "RuleError",
    "Schema",
    "anti_keys",
    "apply_composition",
    "apply_nary_composition",
    "apply_refinement",
    "apply_upward_closure",
    "block_trace",
    "build_counterexample",
    "check_derivation",
    "dataset_stats",
    "derive_keyset",
    "first_invalid_step",
    "format_attr_set",
    "format_derivation",
    "format_keyset",
    "format_schema",
    "from_3sat",
    "gen_random_keyset",
    "gen_sequential_keysets",
    "generate_armstrong",
    "implies",
    "implies_bruteforce",
    "implies_unary",
    "is_armstrong_unary",
    "is_x_total",
    "load_csv",
    "minimal_transversals",
    "pair_separated_by",
    "pair_violates",
    "parse_attr_set",
    "parse_derivation",
    "parse_dimacs",
    "parse_keyset",
    "parse_keyset_lines",
    "parse_schema",
    "run_bench",
    "satisfiable",
    "satisfies",
    "simulate_nary",
    "size_bounds",
    "synthetic_relation",
    "violating_blocks",
    "violating_tuples_naive",
    "violation_percentage",
    "write_csv",
]
