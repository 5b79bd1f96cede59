"""Typing terms with holes, then normalizing them.

Run: python demos/02_typing_and_reduction.py
"""
from nomstlc import (
    Signature,
    TypingError,
    beta_eq,
    infer,
    parse_context,
    parse_term,
    show,
)
from nomstlc.reduction import trace_normalize
from nomstlc.syntax import Base, Arrow

sig = Signature(frozenset({"t"}), {"F": Arrow(Base("t"), Base("t"))})
ctx = parse_context("'b:t, X:t")

r = parse_term("\\a:t. X['b:=a]")
print(f"{ctx} |- {show(r)} : {infer(sig, ctx, r)}")

# A moderated atom must itself be typed, even though it is not free.
try:
    infer(sig, parse_context("X:t"), parse_term("X['c:=X]"))
except TypingError as err:
    print("rejected:", err)

# Reduction also works inside moderations.
r = parse_term("(\\f:t -> t. f (X['b:=(\\c:t. c) 'b])) F", sig.constants)
for line in trace_normalize(sig, ctx, r).lines():
    print(line)

# A moderation X['b:='b] is not erased: X may later capture 'b.
for other in ("F X['b:='b]", "F X"):
    print(f"beta-equal to {other}:", beta_eq(sig, ctx, r, parse_term(other, sig.constants)))
