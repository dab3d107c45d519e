# Logic Module for DTOrder
# Contains ordering heuristics, exact solvers, generators, trace I/O, the benchmark protocol and report export.
