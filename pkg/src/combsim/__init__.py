"""Simulation preorders, C-ATL/QCTL evaluation and assume-guarantee
verification for two-player games and MDPs."""

from .abstraction import (Partition, alternating_simulation_abstraction, coarsest_partition,
                          simulation_abstraction, singleton_partition)
from .cegar import (CegarResult, CexDag, CexNode, RunStats, ag_cegar, ag_cegar_mdp,
                    check_ag_premise, concretize, extract_cex, is_feasible, monolithic_check,
                    refine)
from .errors import *  # noqa: F401,F403
from .logic import (distinguishing_formula, distinguishing_formulas, eval_atl, eval_qctl,
                    parse_formula)
from .model import (BOTTOM, TURN, AlternatingGame, Game, Mdp, as_alternating, compose_games,
                    compose_mdps, make_game, make_mdp, mdp_to_game)
from .modelio import parse_model, serialize_model
from .relations import (RelationMatrix, SimGame, alternating_simulates, build_combined_game,
                        build_modified_game, combined_simulates, coinductive_combined_simulation,
                        max_alternating_simulation, max_combined_simulation, max_simulation,
                        simulates)
from .solve import SafetyInstance, SolveResult, solve_safety
