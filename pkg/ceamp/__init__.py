from ceamp.formula import brute_force_sat, normalize, normalize_with_map, parse_dimacs
from ceamp.reduction import Instance, instance_stats, reduce
from ceamp.solver import solve_packing, solve_zero_excess
from ceamp.transform import decode_assignment, encode_solution
from ceamp.verifier import verify_packing, verify_solution, verify_structure
