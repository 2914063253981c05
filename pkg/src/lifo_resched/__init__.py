"""Exact rescheduling of a single-machine job sequence under LIFO stack moves."""
from .baselines import baseline_value, edd, lawler_moore_weighted, moore_hodgson, wspt
from .bench import GenConfig, RunRecord, audit, gap, generate, run_study, summarize
from .errors import (CapacityExceededError, IncompatibleMovesError, InvalidInstanceError,
                     InvalidScheduleError, NonMonotoneFunctionError, OracleLimitError,
                     ReschedError, ResourceLimitError)
from .lmax import PhimaxSearchState, lmax_tables, solve_lmax, solve_lmax_omega, solve_phimax
from .model import (Instance, Job, RegularFunctionSet, Schedule, Solution, evaluate,
                    evaluate_lmax, evaluate_num_late, evaluate_phimax, evaluate_twct,
                    evaluate_weighted_late, format_instance, parse_instance, read_instance,
                    write_instance)
from .moves import (Move, MoveSet, StackTrace, apply_moves, is_reachable, reconstruct_move_set,
                    simulate, stack_metrics)
from .numlate import build_multiset, numlate_tables, solve_num_late, solve_num_late_omega
from .oracle import enumerate_feasible, oracle_optimum, oracle_subsequence_state
from .solvers import LevelProfile, solve
from .twct import move_cost, solve_twct, solve_twct_omega, twct_tables
from .wlate import (has_equal_cardinality_partition, make_partition_instance, solve_weighted_late,
                    solve_wlate, solve_wlate_alt, solve_wlate_alt_omega, solve_wlate_omega,
                    weighted_late_tables, wlate_alt_tables, wlate_tables)

__version__ = "0.1.0"
