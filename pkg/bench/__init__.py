from .oracle import OracleResult, grid_oracle, lipschitz_bound
from .suite import SuiteInstance, maxcut_polynomial, oracle_suite, hierarchy_suite
from .pipeline import smallest_r_for_eps, rbounds2, end_to_end_bound, construct_certificate
from .reports import (VrdCell, table_vrd, figures_data, write_table_csv, write_figures_csv,
                      published_vrd, published_cells)

__all__ = ['OracleResult', 'grid_oracle', 'lipschitz_bound', 'SuiteInstance', 'maxcut_polynomial',
           'oracle_suite', 'hierarchy_suite', 'smallest_r_for_eps', 'rbounds2', 'end_to_end_bound',
           'construct_certificate', 'VrdCell', 'table_vrd', 'figures_data', 'write_table_csv',
           'write_figures_csv', 'published_vrd', 'published_cells']
