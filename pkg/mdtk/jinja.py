from mdtk.cyclo import Cyc, RootOfUnity

JINJA_FILTERS = []


def add_jinja_filter(arg=None):
    def decorator(func):
        JINJA_FILTERS.append(func)
        return func

    if callable(arg):
        return decorator(arg)  # return 'wrapper'
    else:
        return decorator  # ... or 'decorator'


@add_jinja_filter
def cyc(value):
    """Exact display of a cyclotomic number, root of unity or integer."""
    if isinstance(value, (Cyc, RootOfUnity)):
        return str(value)
    return f"{value}"


@add_jinja_filter()
def approx(value, digits=6):
    """A floating approximation, with the imaginary part dropped when it is zero."""
    z = complex(value)
    if abs(z.imag) < 10 ** -digits:
        return f"{z.real:.{digits}g}"
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"


@add_jinja_filter
def labels(values):
    return ", ".join(str(v) for v in values) or "-"
