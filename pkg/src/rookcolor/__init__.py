"""Complete proper colourings of Cartesian products of complete graphs."""
from .core import (UNASSIGNED, ColorMatrix, FrequencyProfile, PairLedger, TypeSignature,
                   build_ledger, col_stats, frequency_profile, in_family, is_complete,
                   is_proper, parse_matrix, format_matrix, read_matrix, row_stats,
                   type_of, write_matrix)

__version__ = "0.1.0"
