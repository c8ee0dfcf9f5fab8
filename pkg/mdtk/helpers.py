import json
import threading
import warnings
from pathlib import Path

from jinja2 import Environment, PackageLoader, StrictUndefined
from markdown import markdown

from mdtk.cyclo import Cyc, RootOfUnity
from mdtk.exceptions import ValidationError
from mdtk.jinja import JINJA_FILTERS
from mdtk.modular import ModularDatum, kwd_mark

# anything -> final return
WRAPPER = """
<!doctype html>

<html lang="en"> <head> <meta charset="utf-8">
<title>{title}</title>
</head>
<body>
{content}
</body>
</html>
"""

_jinja_env = Environment(
    loader=PackageLoader('mdtk', 'templates'),
    undefined=StrictUndefined,
    keep_trailing_newline=True,
)
for _func in JINJA_FILTERS:
    _jinja_env.filters[_func.__name__] = _func


def add_wrapper(content, title="mdtk", wrapper=WRAPPER):
    """Add a basic HTML template around some given text.

    :param content: The HTML to fill in.
    :type content: str
    :param wrapper: A string that contains '{content}' and '{title}'.
    :type wrapper: str

    :returns: the wrapped content.
    :rtype: str
    """
    return wrapper.format(content=content, title=title)


def render_template(template, **kwargs):
    """Given the name of a packaged template, and arguments to fill in,
    render that template.

    :param template: a template name, relative to ``mdtk/templates``.
    :type template: str

    :param kwargs: the variables to be set as the context for the jinja
                   template.
    """
    return _jinja_env.get_template(template).render(**kwargs)


def render_summary_html(summary_markdown, title="mdtk catalog"):
    """Markdown summary table -> standalone HTML page."""
    return add_wrapper(markdown(summary_markdown, extensions=['tables']), title=title)


# persistence


def datum_to_json(md):
    """:rtype: dict"""
    return {
        'name': md.name,
        'labels': list(md.labels),
        'S': [[x.to_json() for x in row] for row in md.S],
        'T': [t.to_json() for t in md.T],
    }


def datum_from_json(data):
    """Build a datum from its JSON document, with structural validation.

    :raises ValidationError: if the document does not fit the schema or
                             the data is malformed.
    """
    if not isinstance(data, dict):
        raise ValidationError("A modular datum document must be a JSON object.")
    missing = {'labels', 'S', 'T'} - set(data)
    if missing:
        raise ValidationError(f"Missing keys in modular datum document: {', '.join(sorted(missing))}.")
    extra = set(data) - {'name', 'labels', 'S', 'T'}
    if extra:
        raise ValidationError(f"Unknown keys in modular datum document: {', '.join(sorted(extra))}.")
    if not isinstance(data['S'], list) or not all(isinstance(row, list) for row in data['S']):
        raise ValidationError("S must be a list of rows.")
    if not isinstance(data['T'], list):
        raise ValidationError("T must be a list.")
    S = [[Cyc.from_json(x) for x in row] for row in data['S']]
    T = [RootOfUnity.from_json(t) for t in data['T']]
    return ModularDatum(data['labels'], S, T, name=data.get('name'))


def save(md, path):
    """Write a datum to a JSON file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(datum_to_json(md), indent=1, ensure_ascii=False) + '\n')


def load(path):
    """Read a datum from a JSON file.

    :raises ValidationError: on unparsable or malformed files.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise ValidationError(f"{path} is not valid JSON: {err}") from err
    md = datum_from_json(data)
    if md.name is None:
        warnings.warn(f"{path} does not name its datum; using {path.stem!r}.")
        md.name = path.stem
    return md


def freeze_func(arg=None):
    """A decorator for a function, that causes it to return the same
    result every time it's called (given the same arguments).

    Safe to share between threads; the function itself may run more than
    once under contention, but one result wins.

    >>> @freeze_func()
    >>> def f()
    >>>     f.num += 1
    >>>     return f.num
    >>> f.num = 0
    >>> f()
    1
    >>> f()
    1
    >>> f.num
    1
    """
    def decorator(func):
        def wrapper(*args, **kwargs):
            # key function taken from functools.lru_cache()
            key = args + kwd_mark + tuple(sorted(kwargs.items()))

            with wrapper._lock:
                if key in wrapper._returned:
                    return wrapper._returned[key]

            val = func(*args, **kwargs)

            with wrapper._lock:
                return wrapper._returned.setdefault(key, val)
        wrapper._returned = {}
        wrapper._lock = threading.Lock()
        return wrapper

    # works both as @freeze_func, @freeze_func()
    if callable(arg):
        return decorator(arg)
    return decorator
