"""A three-element model that holes can tell apart from a genuine one.

Run: python demos/04_counterexample_model.py
"""
from nomstlc import parse_context, parse_term
from nomstlc.models import Valuation, bundled_model_path, check_axioms, load_finite_model, validate

model = load_finite_model(bundled_model_path())
print("elements:", sorted(model.elements))
print("missing:", model.missing)

for line in check_axioms(model).lines():
    print(line)

# Without unknowns nothing can observe the element 1.  With an unknown
# valued at 1, the equality X['a:='a] = X fails.
ctx = parse_context("'a:tau, X:tau")
r, s = parse_term("X['a:='a]"), parse_term("X")
for label in ("0", "1", "a_tau"):
    ok = validate(model, Valuation(model, {"X": label}), ctx, r, s)
    print(f"X = {label}: X['a:='a] = X is {'valid' if ok else 'not valid'}")
