"""The syntactic model: elements are beta-normal forms.

Run: python demos/03_term_model.py
"""
from nomstlc import parse_context, parse_term
from nomstlc.gen import default_signature
from nomstlc.models import SamplingPlan, TermModel, Valuation, check_axioms, interp, validate

sig = default_signature()
M = TermModel(sig)
ctx = parse_context("'b:t, X:t")

# A valuation may only use elements supported by DOWN atoms.
val = Valuation(M, {"X": M.element(ctx, parse_term("'b"))})
print("[[\\a:t. X['b:=a]]] =", interp(M, val, ctx, parse_term("\\a:t. X['b:=a]")))

# The model validates exactly the beta-equalities.
r, s = parse_term("(\\a:t. G a a) C", sig.constants), parse_term("G C C", sig.constants)
print("valid (\\a:t. G a a) C = G C C:", validate(M, val, ctx, r, s))

# Each substitution axiom holds on every sampled cell.
for line in check_axioms(M, SamplingPlan(samples=100)).lines():
    print(line)
