"""smplite: a small semantic-patch engine for a subset of C.

Rules written in a subset of SmPL are parsed with :func:`parse_smpl`,
matched against a lossless syntax tree and turned into byte-exact edits.

>>> import smplite
>>> rules = smplite.parse_smpl("@@ expression e; @@\\n- foo(e)\\n+ bar(e)\\n")
>>> smplite.transform_source(rules, "int x = foo(1);\\n").output
'int x = bar(1);\\n'
"""
from .lexer import SourcePosition, Token, lex
from .cparser import CSyntaxError, Node, SyntaxTree, parse, parse_source, unparse
from .smpl import (
    MetavarDecl, PatternRule, RuleSet, ScriptRule, ScriptSubsetError,
    SmplSyntaxError, format_ruleset, parse_smpl, validate,
)
from .engine import (
    BindingEnv, BoundValue, InvalidIdentifier, MatchResult, RunResult,
    ScriptTableMiss, TransformError, eval_script, gen_fresh, match_pattern,
    run_rules, transform_source,
)
from .transform import (
    DiffApplyError, Edit, EditScript, SubstitutionError, apply, emit_diff,
    plan_edits, reapply_diff,
)
from .rule_catalog import Fixture, load_fixtures, run_fixture

__version__ = "0.1.0"

__all__ = [
    "BindingEnv", "BoundValue", "CSyntaxError", "DiffApplyError", "Edit",
    "EditScript", "Fixture", "InvalidIdentifier", "MatchResult", "MetavarDecl",
    "Node", "PatternRule", "RuleSet", "RunResult", "ScriptRule",
    "ScriptSubsetError", "ScriptTableMiss", "SmplSyntaxError", "SourcePosition",
    "SubstitutionError", "SyntaxTree", "Token", "TransformError", "apply",
    "emit_diff", "eval_script", "format_ruleset", "gen_fresh", "lex",
    "load_fixtures", "match_pattern", "parse", "parse_smpl", "parse_source",
    "plan_edits", "reapply_diff", "run_fixture", "run_rules",
    "transform_source", "unparse", "validate",
]
