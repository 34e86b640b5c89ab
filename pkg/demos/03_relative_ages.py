"""Relative ages from annotations and boundaries, and contradiction cycles.

The relation graph turns "A above B" annotations and boundary young/old pairs
into a deterministic oldest-first order, or pinpoints the offending cycle.
"""
from geosketcher import AgeOrder, CycleDiagnostic, relative_ages
from geosketcher.sketch import RelationKind
from geosketcher.stratigraphy import AgeEdge, EdgeProvenance, make_graph


def edge(younger, older):
    return AgeEdge(younger, older, EdgeProvenance.ANNOTATION, RelationKind.ABOVE)


units = ["basement", "marl", "chalk", "till"]
consistent = [edge("marl", "basement"), edge("chalk", "marl"), edge("till", "chalk")]
result = relative_ages(make_graph(units, consistent))
assert isinstance(result, AgeOrder)
print("consistent sketch, oldest first:", " < ".join(result.units_oldest_first))

# an unconstrained unit slots in deterministically (lexicographic tie-break)
with_floating = make_graph(units + ["dike"], consistent)
print("with floating 'dike':          ", " < ".join(relative_ages(with_floating).units_oldest_first))

# contradict: till above chalk, but also chalk above till
contradiction = consistent + [edge("chalk", "till")]
diag = relative_ages(make_graph(units, contradiction))
assert isinstance(diag, CycleDiagnostic)
print("contradictory sketch cycle:    ", " -> ".join(diag.cycle + (diag.cycle[0],)))
for e in diag.edges:
    print(f"   {e.younger} declared younger than {e.older}  [{e.provenance.value}]")
