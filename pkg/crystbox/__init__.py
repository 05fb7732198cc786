from .exact_linalg import *
from .cyclotomic import *
from .finite_matrix_group import *
from .cryst_group import *
from .cohomology import *
from .repr_hodge import *
from .report import *
from .catalog import *
