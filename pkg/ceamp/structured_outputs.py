"""Pydantic models of every JSON document the workbench reads or writes."""
from typing import Literal

from pydantic import BaseModel, Field, TypeAdapter


class FormulaRecord(BaseModel):
    """
    The source formula, stored in DIMACS literal notation.
    """
    variables: int = Field(description="Number of variables n.")
    clauses: list[list[int]] = Field(
        default_factory=list,
        description="Clauses as lists of signed 1-based literals.",
    )


class VertexRecord(BaseModel):
    id: str = Field(description="Canonical vertex id, e.g. v[0][3][4].")
    clique: str = Field(description="Canonical id of the clique of V(H) containing the vertex.")
    level: int = Field(description="Level of that clique in the merging model, 0..4.")


class PackedP3Record(BaseModel):
    x: str
    y: str = Field(description="The center of the P3.")
    z: str
    role: Literal["var", "tra", "pad"]


class InstanceDocument(BaseModel):
    """
    A CEaMP instance (G, H, ell) together with its clique partition.
    """
    ell: int = Field(default=0, description="Excess budget above the packing size.")
    formula: FormulaRecord = Field(
        default_factory=lambda: FormulaRecord(variables=0),
        description="The normalized formula the instance was reduced from.",
    )
    vertices: list[VertexRecord] = Field(default_factory=list)
    edges: list[tuple[str, str]] = Field(default_factory=list)
    packing: list[PackedP3Record] = Field(default_factory=list)


class EditRecord(BaseModel):
    u: str
    v: str
    kind: Literal["delete", "insert"]


EditSetDocument = TypeAdapter(list[EditRecord])


class CheckResult(BaseModel):
    """
    Outcome of one verifier check.
    """
    check: str = Field(description="Name of the check.")
    status: Literal["pass", "fail", "info"]
    witness: list[str] = Field(
        default_factory=list,
        description="Violations, or the recorded value of an informational check.",
    )


class VerificationReport(BaseModel):
    checks: list[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def failed(self) -> list[str]:
        return [c.check for c in self.checks if c.status == "fail"]

    def get(self, check: str) -> CheckResult:
        return next(c for c in self.checks if c.check == check)

    def extend(self, other: "VerificationReport") -> "VerificationReport":
        return VerificationReport(checks=self.checks + other.checks)


class StatsDocument(BaseModel):
    vertex_count: int = 0
    edge_count: int = 0
    var_p3s: int = 0
    tra_p3s: int = 0
    pad_p3s: int = 0
    clique_sizes: dict[str, int] = Field(
        default_factory=dict,
        description="Size of every clique of V(H), keyed by clique id.",
    )
    max_incidence: int = Field(
        default=0,
        description="Largest number of packed P3s containing a single vertex.",
    )
