from .ast import (
    BoolOp,
    Comparison,
    FilterExpr,
    Inverse,
    Not,
    Path,
    Pred,
    PredVar,
    Query,
    Row,
    Sequence,
    Solution,
    TriplePattern,
    Var,
    ZeroOrMore,
)
from .engine import evaluate
from .oracle import MAX_ORACLE_TRIPLES, OracleSizeError, evaluate_oracle
from .parser import (
    QuerySyntaxError,
    UnsupportedFeatureError,
    parse_group_fragment,
    parse_query,
)
from .templates import (
    Fragment,
    FragmentSyntaxError,
    PlaceholderError,
    TemplateRegistry,
    UnknownTemplateError,
    bind_template,
)

__all__ = [
    "Var",
    "Pred",
    "PredVar",
    "Inverse",
    "Sequence",
    "ZeroOrMore",
    "Path",
    "TriplePattern",
    "Comparison",
    "BoolOp",
    "Not",
    "FilterExpr",
    "Query",
    "Row",
    "Solution",
    "parse_query",
    "parse_group_fragment",
    "QuerySyntaxError",
    "UnsupportedFeatureError",
    "evaluate",
    "evaluate_oracle",
    "OracleSizeError",
    "MAX_ORACLE_TRIPLES",
    "TemplateRegistry",
    "Fragment",
    "bind_template",
    "UnknownTemplateError",
    "PlaceholderError",
    "FragmentSyntaxError",
]
