"""FSP-lite front end: tokenizer, parser, expression evaluator and printer."""

from .evaluate import eval_expr
from .lexer import KEYWORDS, Token, tokenize
from .parser import check_references, parse, parse_text
from .printer import format_spec
from .tree import *  # noqa: F401,F403

format = format_spec  # noqa: A001

__all__ = ["KEYWORDS", "Token", "tokenize", "parse", "parse_text", "check_references", "eval_expr", "format_spec", "format"]
