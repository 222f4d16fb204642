__all__ = ("Plural", "format_number", "TabularData")


class Plural:
    """``f"{Plural(n):block}"`` gives "1 block" or "3 blocks"; irregular forms go after a bar."""

    def __init__(self, value):
        self.value = value

    def __format__(self, format_spec):
        singular, _, plural = format_spec.partition('|')
        word = singular if abs(self.value) == 1 else (plural or f'{singular}s')
        return f'{self.value:,} {word}'


def format_number(value):
    """Integers stay integers, reals get four decimals."""
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if isinstance(value, float):
        return f'{value:.4f}'
    return str(value)


class TabularData:
    """Plain text table; text columns align left, numeric columns right."""

    def __init__(self):
        self._columns = []
        self._rows = []
        self._numeric = []

    def set_columns(self, columns):
        self._columns = [str(c) for c in columns]
        self._numeric = [True] * len(self._columns)

    def add_row(self, row):
        if len(row) != len(self._columns):
            raise ValueError(f'row has {len(row)} cells, the table {len(self._columns)} columns')

        for i, value in enumerate(row):
            if isinstance(value, str):
                self._numeric[i] = False
        self._rows.append([format_number(v) for v in row])

    def add_rows(self, rows):
        for row in rows:
            self.add_row(row)

    def render(self):
        """
        Example:
        +--------+---------+
        | engine | mean io |
        +--------+---------+
        | bm-bfs | 12.4000 |
        | spj    | 80.0000 |
        +--------+---------+
        """
        widths = [max(len(cell) for cell in column) for column in zip(self._columns, *self._rows)]
        rule = '+' + '+'.join('-' * (w + 2) for w in widths) + '+'

        def line(cells, header=False):
            out = []
            for cell, width, numeric in zip(cells, widths, self._numeric):
                out.append(cell.rjust(width) if numeric and not header else cell.ljust(width))
            return '| ' + ' | '.join(out) + ' |'

        return '\n'.join([rule, line(self._columns, header=True), rule, *map(line, self._rows), rule])
