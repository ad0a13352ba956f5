"""Tour of the building blocks: submodular objectives and matroid oracles.

Run:  python3 demos/demo_objectives_and_matroids.py
"""

from robust_summary import (
    make_cut_function,
    make_facility_location,
    make_graphic,
    make_modular,
    make_partition,
    make_uniform,
    make_weighted_coverage,
)

# --- four objective families -------------------------------------------------

coverage = make_weighted_coverage([1.0, 1.0, 1.0], [[0, 1], [1, 2]])
print("coverage  f({0,1}) =", coverage.value([0, 1]), " (covers the whole universe)")

facility = make_facility_location([[0.2, 0.9], [0.7, 0.1]])
print("facility  f({0}) =", facility.value([0]), "  f({0,1}) =", facility.value([0, 1]))

cut = make_cut_function(3, [(0, 1, 1.0), (1, 2, 1.0)])
print("cut       f({1}) =", cut.value([1]), " but f(V) =", cut.value([0, 1, 2]),
      " -> non-monotone")
print("cut       marginal of 1 given {0} on a single heavy edge:",
      make_cut_function(2, [(0, 1, 5.0)]).marginal(1, [0]), " (negative!)")

modular = make_modular([1.0, 2.0, 3.0])
print("modular   f({0,2}) =", modular.value([0, 2]))

# diminishing returns in action
print("\ncoverage marginal of element 1:")
print("  against {}     :", coverage.marginal(1, []))
print("  against {0}    :", coverage.marginal(1, [0]), " (smaller: item 1 already covered)")

# every oracle keeps a query tally for cost accounting
print("coverage oracle answered", coverage.queries, "value queries so far")

# --- three matroid families --------------------------------------------------

uniform = make_uniform(5, 2)
print("\nuniform(5,2): {0,1} independent?", uniform.is_independent([0, 1]),
      " {0,1,2}?", uniform.is_independent([0, 1, 2]))

partition = make_partition([[0, 1], [2, 3, 4]], [1, 2])
print("partition: one per first block -> {0,2,3} independent?",
      partition.is_independent([0, 2, 3]),
      " {0,1}?", partition.is_independent([0, 1]))

# graphic matroid: elements are edges, independent sets are forests
square_with_diagonal = make_graphic(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
print("graphic on a square plus diagonal: rank =", square_with_diagonal.k)

# circuits: the unique minimal dependent set closed by one more element
tree = [0, 1, 2]  # edges (0,1), (1,2), (2,3)
closing = 4       # the diagonal (0,2)
print("adding the diagonal to the path closes the cycle:",
      sorted(square_with_diagonal.circuit(tree, closing)))
print("uniform circuit over capacity:", sorted(make_uniform(3, 2).circuit([0, 1], 2)))
