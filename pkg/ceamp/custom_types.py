from typing import TypeAlias, Hashable

# A vertex of any graph handled by graph_core; instances use VertexId
Vertex: TypeAlias = Hashable

# Index of a variable x_i (0-based)
VariableIndex: TypeAlias = int
# Index of a clause Gamma_d (0-based)
ClauseIndex: TypeAlias = int
# Position of a literal inside its clause: 0 (p), 1 (q) or 2 (r)
LiteralPosition: TypeAlias = int
# Level of a clique in the merging model, 0..4
Level: TypeAlias = int

# Text forms as they appear in instance and edit-set JSON
VertexText: TypeAlias = str        # e.g. "v[0][3][4]", "Q[1][2][7]", "T[1][0][5]"
CliqueText: TypeAlias = str        # e.g. "K[0][3]", "Q[1][2]", "T[1][0]"
