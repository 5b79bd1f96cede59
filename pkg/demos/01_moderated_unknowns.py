"""Moderated unknowns: how atom substitution and instantiation interact.

Run: python demos/01_moderated_unknowns.py
"""
from nomstlc import free_atoms, parse_l1, parse_l2, parse_term, show, subst_l1, subst_l2

# An unknown X stands for a term that is not known yet.  A substitution for
# a DOWN atom cannot be carried out on X, so it is recorded on X instead.
r = parse_term("X['b:='b']")
print("start:       ", show(r))
print("then 'b':='b'':", show(subst_l1(r, parse_l1("'b':='b''"))))

# An UP atom can never occur in whatever X becomes, except through a
# moderation, so its substitution only acts on the recorded ranges.
r = parse_term("X['b:=a]")
print("X['b:=a][a:='b''] =", show(subst_l1(r, parse_l1("a:='b''"))))

# Free atoms of an unknown are every DOWN atom not yet moderated away.
print("fa(X['b:=c]) =", free_atoms(parse_term("X['b:=c]")))

# Completing the hole: instantiating X by 'b lets the lambda capture it.
open_term = parse_term("\\a:t. X['b:=a]")
print(show(open_term), " with X:='b  gives ", show(subst_l2(open_term, parse_l2("X:='b"))))

# Instantiation itself avoids capture of UP atoms.
print(show(subst_l2(parse_term("\\a:t. X"), parse_l2("X:=a"))))
