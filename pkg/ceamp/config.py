"""Configuration of a CEaMP workbench run."""
import dataclasses


@dataclasses.dataclass(frozen=True)
class FormulaConfig:
  """Configuration of the formula tooling.

  Attributes:
    sat_variable_limit: Largest variable count the brute-force SAT oracle
        accepts. Beyond it the oracle refuses instead of enumerating.
    sat_chunk_size: Number of candidate assignments evaluated per vectorised
        batch by the brute-force SAT oracle.
  """
  sat_variable_limit: int = 24
  sat_chunk_size: int = 2**16


@dataclasses.dataclass(frozen=True)
class SolverConfig:
  """Configuration of the exact zero-excess solver and its oracles.

  Attributes:
    time_limit: Wall-clock budget in seconds for one search. `None` disables
        the limit.
    threads: Number of worker threads. A value larger than 1 splits the search
        tree into a frontier explored by a thread pool.
    frontier_depth: How many branching levels are expanded to build the
        frontier in threaded mode.
    oracle_cluster_limit: Largest number of proto-clusters the partition
        oracle enumerates partitions for.
    oracle_vertex_limit: Largest number of vertices the plain cluster editing
        oracle enumerates partitions for.
  """
  time_limit: float | None = 120.0
  threads: int = 1
  frontier_depth: int = 3
  oracle_cluster_limit: int = 12
  oracle_vertex_limit: int = 12


@dataclasses.dataclass(frozen=True)
class VerifierConfig:
  """Configuration of the verifier.

  Attributes:
    incidence_bound: Upper bound on the number of packed P3s a single vertex
        may lie in. `None` records the observed maximum without judging it.
  """
  incidence_bound: int | None = None


@dataclasses.dataclass(frozen=True)
class Config:
  """Configuration of the whole workbench.

  Attributes:
    formula: Configuration of parsing, normalization and the SAT oracle.
    solver: Configuration of the exact solver and the partition oracles.
    verifier: Configuration of the structural verifier.
  """
  formula: FormulaConfig = dataclasses.field(default_factory=FormulaConfig)
  solver: SolverConfig = dataclasses.field(default_factory=SolverConfig)
  verifier: VerifierConfig = dataclasses.field(default_factory=VerifierConfig)
