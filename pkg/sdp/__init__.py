from .problem import (SdpProblem, SdpBuilder, SolverReport, GramSOS, linearize_products, prune_gram_basis,
                      export_problem, import_problem)
from .backends import SolverBackend, CvxpyBackend, get_backend
from .hierarchy import lasserre_bound, compute_vrd, min_sos_cheb_distance, sos_distance_scaling

__all__ = ['SdpProblem', 'SdpBuilder', 'SolverReport', 'GramSOS', 'linearize_products', 'prune_gram_basis',
           'export_problem', 'import_problem', 'SolverBackend', 'CvxpyBackend', 'get_backend',
           'lasserre_bound', 'compute_vrd', 'min_sos_cheb_distance', 'sos_distance_scaling']
