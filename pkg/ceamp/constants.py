"""Project constants for the CEaMP workbench."""

LOGLEVEL_ENVVAR = "LOGLEVEL"
TIME_LIMIT_ENVVAR = "CEAMP_TIME_LIMIT"

# Variable gadget cliques are labelled by F_5.
VARIABLE_FIELD = 5
VARIABLE_CLIQUE_SIZE = 5
CLIQUES_PER_OCCURRENCE = 4

# Final clique sizes of a reduced instance.
CLIQUE_SIZE_K = 5
CLIQUE_SIZE_Q1 = 1
CLIQUE_SIZE_Q2 = 14
CLIQUE_SIZE_Q3 = 4
CLIQUE_SIZE_Q4 = 1
CLIQUE_SIZE_OUTER_T = 34
CLIQUE_SIZE_MIDDLE_T = 46

# Levels of the merging model.
LEVEL_VARIABLE = 0
LEVEL_Q1_Q4 = 1
LEVEL_Q3 = 2
LEVEL_Q2 = 3
LEVEL_TRANSFER = 4

# Literal positions inside a clause.
ROLE_P = 0
ROLE_Q = 1
