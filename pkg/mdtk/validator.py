import math
import warnings

from mdtk import modular
from mdtk.cyclo import Cyc, RootOfUnity
from mdtk.exceptions import ValidationError
from mdtk.parser import parse_name


def validate_datum(labels, S, T):
    """Structural validation of modular data (not the modular axioms).

    :param labels: the labels, unit first.
    :param S: the S-matrix as a sequence of rows of Cyc.
    :param T: the T-diagonal as RootOfUnity values.

    :raises ValidationError: describing the first malformation found.
    :rtype: bool
    """
    r = len(labels)
    if r == 0:
        raise ValidationError("Modular data needs at least one simple object.")
    if not all(isinstance(label, str) and label for label in labels):
        raise ValidationError("Labels must be nonempty strings.")
    if len(set(labels)) != r:
        raise ValidationError("Labels must be unique.")
    if len(S) != r or any(len(row) != r for row in S):
        raise ValidationError(f"S must be a {r} x {r} matrix.")
    if len(T) != r:
        raise ValidationError(f"T must have {r} entries, got {len(T)}.")
    if not all(isinstance(x, Cyc) for row in S for x in row):
        raise ValidationError("S entries must be cyclotomic numbers.")
    if not all(isinstance(t, RootOfUnity) for t in T):
        raise ValidationError("T entries must be roots of unity.")

    if S[0][0] != 1:
        raise ValidationError(f"S[0][0] = {S[0][0]} violates the unit normalization S[0][0] = 1.")
    if T[0] != 1:
        raise ValidationError(f"T[0] = {T[0]} violates the unit normalization T[0] = 1.")

    for x in range(r):
        for y in range(x + 1, r):
            if S[x][y] != S[y][x]:
                raise ValidationError(f"S is not symmetric at ({labels[x]}, {labels[y]}).")

    order = math.lcm(*(t.order for t in T))
    for x, row in enumerate(S):
        for y, value in enumerate(row):
            if order % value.conductor == 0:
                continue
            if order % value.reduce_conductor().conductor:
                raise ValidationError(
                    f"S[{labels[x]}][{labels[y]}] = {value} does not lie in Q(zeta_{order})."
                )
            warnings.warn(
                f"S[{labels[x]}][{labels[y]}] is presented at conductor {value.conductor}, "
                f"larger than the order {order} of T."
            )
    return True


def validate_entry(func):
    """Given a family function registered to a catalog, check what it returned.

    :param func: the registered function; it has ``name`` (the name
                 template) and ``family`` attributes.
    :type func: function

    :return: Whether or not the return value given is valid.
    :rtype: bool
    """
    def validate_dict(val, name_elements, family):
        def has_correct_type(key):
            "Return if key is of correct type"
            return isinstance(key, (tuple, str, int))

        def is_allowed_single(key):
            "Return, if key is a single value, whether it is allowed to be one"
            return len(name_elements) == 1 or isinstance(key, tuple)

        def is_correct_size(key):
            "Return, if key is a tuple, whether it has the right number of parts"
            return not isinstance(key, tuple) or len(key) == len(name_elements)

        if not all(map(has_correct_type, val)):
            raise ValidationError(family + ": family's return did not contain keys of the right type.")

        if not all(map(is_allowed_single, val)):
            error_text = ": family's return contained single values as keys, when it needed multiple parameters."
            raise ValidationError(family + error_text)

        if not all(map(is_correct_size, val)):
            error_text = ": family's return contained incorrect number of parameters for its name."
            raise ValidationError(family + error_text)

        if not all(isinstance(datum, modular.ModularDatum) for datum in val.values()):
            raise ValidationError(family + ": family's return contained values that are not modular data.")

        return True

    family = func.family
    name = func.name
    val = func()
    name_elements = parse_name(name)
    if isinstance(val, modular.ModularDatum):
        if name_elements:
            raise ValidationError(f"{family}'s name requires parameters, which were not provided.")
    elif isinstance(val, dict):
        if len(name_elements) == 0:
            error_text = f"{family}'s name did not specify parameters, but returned several data anyway."
            raise ValidationError(error_text)
        validate_dict(val, name_elements, family)
    else:
        raise ValidationError(f"{family} did not return modular data.")

    return True
