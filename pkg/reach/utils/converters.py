import click


class ListParam(click.ParamType):
    """Comma separated values of one type, e.g. ``2,4,8``."""

    def __init__(self, item=int):
        self.item = item
        self.name = f"{item.__name__}-list"

    def convert(self, value, param, ctx):
        if isinstance(value, (list, tuple)):
            return list(value)

        try:
            values = [self.item(v) for v in value.split(",") if v.strip()]
        except ValueError:
            self.fail(f"{value!r} is not a comma separated list of {self.item.__name__}", param, ctx)

        if not values:
            self.fail("expected at least one value", param, ctx)
        return values


class RangeParam(click.ParamType):
    """An inclusive ``lo,hi`` pair of integers."""
    name = "range"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value

        lo, sep, hi = value.partition(",")
        try:
            lo, hi = int(lo), int(hi if sep else lo)
        except ValueError:
            self.fail(f"{value!r} is not a valid range", param, ctx)

        if lo > hi:
            self.fail(f"range {value!r} is empty", param, ctx)
        return lo, hi


INT_LIST = ListParam(int)
FLOAT_LIST = ListParam(float)
RANGE = RangeParam()
