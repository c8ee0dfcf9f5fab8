"""Entry names.

A name is a ``/``-separated list of nonempty segments; it doubles as the
relative path an entry is rendered to. A segment may hold ``<var>`` tokens,
which a family fills from the keys of the data it returns, as in
``pointed/C<n>/<a>``.
"""
import re

TOKEN_RE = re.compile(r'<([A-Za-z_]\w*)>')
UNSAFE_RE = re.compile(r'[/<>\s]')


def _segments(name):
    if not isinstance(name, str):
        raise TypeError("Name can't be processed - not a string.")
    segments = name.split('/')
    if not all(segments):
        raise ValueError(f"Name {name!r} has an empty segment.")
    for segment in segments:
        if UNSAFE_RE.search(TOKEN_RE.sub('', segment)):
            raise ValueError(f"Malformed segment {segment!r} in {name!r}.")
    return segments


def parse_name(name):
    """Given a name formatted like ising/<j>/<eps>,
    will return ['j', 'eps'].

    :raises ValueError: if the name is malformed.
    """
    _segments(name)
    return list(dict.fromkeys(TOKEN_RE.findall(name)))


def fill_name(name, params):
    """Given a name formatted like ising/<j>/<eps>,
    and a list of params, return the filled name.

    :param name: a name containing "<variables>".
    :type name: str

    :param params: values to fill into the name, in order; a single value
                   may be given on its own.
    :type params: tuple, str or int

    :raises ValueError: on a missing parameter, or a value that is empty or
                        would change the segments of the name.
    :rtype: str
    """
    tokens = parse_name(name)
    if not isinstance(params, (tuple, list)):
        params = (params,)
    if len(params) != len(tokens):
        raise ValueError(f"{name} takes {len(tokens)} parameter(s), got {len(params)}.")

    values = {}
    for token, param in zip(tokens, params):
        value = str(param)
        if not value or UNSAFE_RE.search(value):
            raise ValueError(f"{value!r} can't fill <{token}> in {name}.")
        values[token] = value

    return TOKEN_RE.sub(lambda m: values[m.group(1)], name)


def match_name(pattern, name):
    """Match a filled name against a name pattern.

    >>> match_name('ising/<j>/<eps>', 'ising/3/-')
    {'j': '3', 'eps': '-'}

    :returns: the token values, or None if the name doesn't match.
    :rtype: dict or None
    """
    _segments(pattern)
    seen = set()
    parts = []
    position = 0
    for m in TOKEN_RE.finditer(pattern):
        parts.append(re.escape(pattern[position:m.start()]))
        token = m.group(1)
        parts.append(f'(?P={token})' if token in seen else rf'(?P<{token}>[^/<>\s]+)')
        seen.add(token)
        position = m.end()
    parts.append(re.escape(pattern[position:]))
    found = re.fullmatch(''.join(parts), name)
    return found.groupdict() if found else None
