"""Named quivers accepted on the command line, and the regular simples of one tube for each of them."""

from quiver_core.quiver_core import Arrow, Quiver, UnknownQuiver


def jordan() -> Quiver:
    return Quiver(("0",), (Arrow("a", "0", "0"),))


def cycle(n: int) -> Quiver:
    """Oriented cycle 0 -> 1 -> ... -> n-1 -> 0; n = 1 is the Jordan quiver with its loop named a0."""
    vertices = tuple(str(i) for i in range(n))
    return Quiver(vertices, tuple(Arrow(f"a{i}", str(i), str((i + 1) % n)) for i in range(n)))


def kronecker() -> Quiver:
    return Quiver(("1", "2"), (Arrow("a", "1", "2"), Arrow("b", "1", "2")))


def dtilde4() -> Quiver:
    """Four arrows into a central vertex 0."""
    return Quiver(("0", "1", "2", "3", "4"), tuple(Arrow(f"a{i}", str(i), "0") for i in range(1, 5)))


def atilde(n: int) -> Quiver:
    """Acyclic orientation of an n-cycle: the path 0 -> ... -> n-1 plus a direct arrow b: 0 -> n-1."""
    if n < 2:
        raise UnknownQuiver(f"atilde:{n}")
    vertices = tuple(str(i) for i in range(n))
    path = tuple(Arrow(f"a{i}", str(i), str(i + 1)) for i in range(n - 1))
    return Quiver(vertices, path + (Arrow("b", "0", str(n - 1)),))


def _parse(name: str) -> tuple[str, int | None]:
    family, _, size = name.partition(":")
    if not size:
        return family.lower(), None
    try:
        return family.lower(), int(size)
    except ValueError:
        raise UnknownQuiver(name)


def named_quiver(name: str) -> Quiver:
    family, size = _parse(name)
    if family == "jordan" and size is None:
        return jordan()
    if family == "kronecker" and size is None:
        return kronecker()
    if family == "dtilde4" and size is None:
        return dtilde4()
    if family == "cycle" and size is not None and size >= 1:
        return cycle(size)
    if family == "atilde" and size is not None and size >= 2:
        return atilde(size)
    raise UnknownQuiver(name)


def tube_simples(name: str) -> list[dict]:
    """Dimension vectors of the regular simples of a tube of maximal period.

    Oriented cycles use the tube of vertex simples; the Jordan and Kronecker quivers only have homogeneous tubes.
    """
    Q = named_quiver(name)
    family, size = _parse(name)

    def unit(*vertices):
        return {v: int(v in vertices) for v in Q.vertices}

    if family == "jordan":
        return [unit("0")]
    if family == "cycle":
        return [unit(v) for v in Q.vertices]
    if family == "kronecker":
        return [unit("1", "2")]
    if family == "dtilde4":
        return [
            {"0": 1, "1": 1, "2": 1, "3": 0, "4": 0},
            {"0": 1, "1": 0, "2": 0, "3": 1, "4": 1},
        ]
    if size == 2:
        return [unit("0", "1")]
    return [unit(str(i)) for i in range(1, size - 1)] + [unit("0", str(size - 1))]
