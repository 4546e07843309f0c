"""
Does fixing the leaves change the entropy?

Neumann, Dirichlet and periodic leaf constraints each come with a criterion
on the basic set.  For a few sets of entropy ln 2 we print the predicted
relation next to the entropy estimated under the constraint.
"""
from treeshift import Signature, check_all, make_basic_set

sig = Signature(2, 2)
sets = {
    "dominant": [(1, 1, 1), (1, 2, 2), (2, 2, 2)],
    "complementary": [(1, 1, 1), (1, 1, 2), (2, 2, 1), (2, 2, 2)],
    "neumann-only": [(1, 1, 1), (2, 1, 1), (1, 2, 2), (2, 2, 2)],
}
for name, blocks in sets.items():
    b = make_basic_set(sig, blocks)
    print(f"{name}: {blocks}")
    for kind, check in check_all(b).items():
        hb = check.numeric["h_boundary_estimate"]
        extra = f"  ({check.note})" if check.note else ""
        print(f"  {kind:12s} {check.relation:14s} h_boundary ~ {hb:.6f}{extra}")
