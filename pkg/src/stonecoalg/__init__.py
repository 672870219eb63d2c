"""Coalgebras over finite set functors, Barr liftings, the ∇ modality,
Stone companions and neighbourhood bisimulation, with profinite towers."""
from .coalgebra import (BehaviourTower, FinCoalgebra, HatCoalgebra, Verdict, behaviour_tower,
                        behavioural_equivalence, behaviourally_equivalent, companion,
                        greatest_L_bisimulation, is_coalgebra_morphism, is_L_bisimulation)
from .errors import (CarrierMismatch, DepthUnavailable, InvalidInput, MalformedValue, ParseError,
                     SizeGuardExceeded, StoneCoalgError, size_guard)
from .functor import (Compose, Constant, Coproduct, FunctorExpr, Identity, Powerset, Product,
                      apply_map, barr_lift, barr_lift_reference, check_lax_laws, enumerate_values,
                      lift_holds)
from .nabla import (ClopenAlgebra, NablaFormula, box, diamond, eval_nabla,
                    generated_clopen_algebra)
from .profinite import (LevelRelation, Thread, ThreadRelation, Tower, cantor_shift_example,
                        check_nbisim_to_depth, closure_approx, closure_theorem_probe, validate_tower)
from .relation import ClopenFamily, Relation, backward_lift, forward_lift, relation_ops
from .stone_hat import (NbisimVerdict, greatest_neighbourhood_bisimulation,
                        is_neighbourhood_bisimulation, is_vietoris_bisimulation, nbisim_join,
                        nbisim_meet)
from .syntax import parse_functor, parse_relation, parse_value, render_value
from .values import Inj

__all__ = [
    "BehaviourTower",
    "CarrierMismatch",
    "ClopenAlgebra",
    "ClopenFamily",
    "Compose",
    "Constant",
    "Coproduct",
    "DepthUnavailable",
    "FinCoalgebra",
    "FunctorExpr",
    "HatCoalgebra",
    "Identity",
    "Inj",
    "InvalidInput",
    "LevelRelation",
    "MalformedValue",
    "NablaFormula",
    "NbisimVerdict",
    "ParseError",
    "Powerset",
    "Product",
    "Relation",
    "SizeGuardExceeded",
    "StoneCoalgError",
    "Thread",
    "ThreadRelation",
    "Tower",
    "Verdict",
    "apply_map",
    "backward_lift",
    "barr_lift",
    "barr_lift_reference",
    "behaviour_tower",
    "behavioural_equivalence",
    "behaviourally_equivalent",
    "box",
    "cantor_shift_example",
    "check_lax_laws",
    "check_nbisim_to_depth",
    "closure_approx",
    "closure_theorem_probe",
    "companion",
    "diamond",
    "enumerate_values",
    "eval_nabla",
    "forward_lift",
    "generated_clopen_algebra",
    "greatest_L_bisimulation",
    "greatest_neighbourhood_bisimulation",
    "is_L_bisimulation",
    "is_coalgebra_morphism",
    "is_neighbourhood_bisimulation",
    "is_vietoris_bisimulation",
    "lift_holds",
    "nbisim_join",
    "nbisim_meet",
    "parse_functor",
    "parse_relation",
    "parse_value",
    "relation_ops",
    "render_value",
    "size_guard",
    "validate_tower",
]

__version__ = "0.1.0"
