from .atl import eval_atl
from .distinguish import distinguishing_formula, distinguishing_formulas
from .formula import (ALMOST, FALSE, P0, P1, P2, P12, POSITIVE, TRUE, And, Atom, Const, Formula,
                      NegAtom, Next, Or, Quant, Until, WeakUntil, always, conj, depth, disj)
from .parser import parse_formula
from .qctl import almost_until, almost_until_formula, apre, eval_qctl, f_apre, f_apre_check
