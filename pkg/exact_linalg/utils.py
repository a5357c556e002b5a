import functools


def memoize(obj):
    """Decorator for memoizing pure functions, keyed on the text of the arguments.

    Field classes and embedding tables are expensive to build and immutable, so they are built once per key.
    """
    cache = obj.cache = {}

    @functools.wraps(obj)
    def memoizer(*args, **kwargs):
        key = str(args) + str(kwargs)
        if key not in cache:
            cache[key] = obj(*args, **kwargs)
        return cache[key]

    return memoizer
