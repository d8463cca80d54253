"""Multi-context systems for coalition formation under uncertainty.

The layers, bottom up:

* :mod:`mcsc.logic`: rules, programs, reducts, answer sets and choice models
* :mod:`mcsc.mcs`: contexts, bridge rules, equilibria
* :mod:`mcsc.poss`: necessity degrees, possibility distributions, possibilistic equilibria
* :mod:`mcsc.coalition`: compiling agent/plan problems into systems and back
* :mod:`mcsc.evaluate`: cost, dominance, conviviality and multi-criteria ranking
* :mod:`mcsc.parsing`, :mod:`mcsc.cli`: text formats and the ``mcsc`` command
"""

from .coalition import (AgentSpec, Assignment, Coalition, CoalitionProblem, DependenceRelation,
                        DistanceTable, ExclusionGroup, Plan, UncertaintyModel, action_possibility,
                        compile_classical, compile_possibilistic, derive_dependencies,
                        extract_coalitions, hide_auxiliary, plan_possibility, unachievable_goals)
from .degree import ONE, ZERO, Degree
from .errors import *  # noqa: F401,F403
from .evaluate import (DependenceGraph, Ranking, ScoreMatrix, agent_distances, coalition_cost,
                       conviviality, cycle_pair_count, economically_dominates, omega, theta,
                       topsis, weighted_product_ratio, weighted_sum, wp_rank)
from .logic import (ChoiceClause, Constraint, Program, Rule, Semantics, answer_sets, fact,
                    least_model, minimal_models, reduct)
from .mcs import (BeliefState, BridgeRule, Context, Mcs, check_consistency, enumerate_equilibria,
                  grounded_equilibria, grounded_equilibrium, is_equilibrium, mcs_reduct)
from .parsing import load_bundled, parse_mcs, parse_problem, print_mcs
from .poss import (PossBeliefState, atom_necessity, atom_possibility, necessities,
                   poss_equilibria, poss_grounded_equilibrium, poss_reduct, possibility_of_state)

__version__ = "0.1.0"
