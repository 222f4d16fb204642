"""Declarative fixed-width on-disk records and index manifests.

Records are declared like tables: a class body of typed columns, collected in
declaration order into a little-endian ``struct`` layout.

    class Edge(Record):
        # The target vertex.
        dst = Column(UInt32)
        weight = Column(UInt32)

Layouts serialise to plain dicts and are stored in every index manifest, so an
index written by an older layout is refused on open instead of misread.
"""
import inspect
import json
import logging
import pydoc
import struct
import uuid
from collections import OrderedDict
from pathlib import Path

import numpy as np

__all__ = (
    "SchemaError",
    "FieldType",
    "UInt16",
    "UInt32",
    "Float64",
    "Column",
    "Record",
    "write_manifest",
    "read_manifest",
)

log = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"


class SchemaError(Exception):
    pass


class FieldType:
    code = None
    python = None

    def to_dict(self):
        o = self.__dict__.copy()
        cls = self.__class__
        o['__meta__'] = cls.__module__ + '.' + cls.__qualname__
        return o

    @classmethod
    def from_dict(cls, data):
        meta = data.pop('__meta__')
        given = cls.__module__ + '.' + cls.__qualname__
        if given != meta:
            cls = pydoc.locate(meta)
            if cls is None:
                raise SchemaError(f'Could not locate "{meta}".')

        self = cls.__new__(cls)
        self.__dict__.update(data)
        return self

    def __eq__(self, other):
        return isinstance(other, self.__class__) and self.__dict__ == other.__dict__


class UInt16(FieldType):
    code = 'H'
    python = int


class UInt32(FieldType):
    code = 'I'
    python = int


class Float64(FieldType):
    code = 'd'
    python = float


class Column:
    __slots__ = ('field_type', 'name')

    def __init__(self, field_type, *, name=None):
        if inspect.isclass(field_type):
            field_type = field_type()

        if not isinstance(field_type, FieldType):
            raise TypeError('Cannot have a non-FieldType derived field_type')

        self.field_type = field_type
        self.name = name

    @classmethod
    def from_dict(cls, data):
        field_type = FieldType.from_dict(dict(data.pop('field_type')))
        return cls(field_type, **data)

    def _to_dict(self):
        return {'name': self.name, 'field_type': self.field_type.to_dict()}

    def __repr__(self):
        return f'<Column {self.name} {self.field_type.__class__.__name__}>'


class RecordMeta(type):
    @classmethod
    def __prepare__(mcs, name, bases, **kwargs):
        return OrderedDict()

    def __new__(mcs, name, parents, dct, **kwargs):
        columns = []

        try:
            record_name = kwargs['record_name']
        except KeyError:
            record_name = name.lower()

        dct['__recordname__'] = record_name

        for elem, value in dct.items():
            if isinstance(value, Column):
                if value.name is None:
                    value.name = elem
                columns.append(value)

        dct['columns'] = columns
        dct['__struct__'] = struct.Struct('<' + ''.join(c.field_type.code for c in columns))
        return super().__new__(mcs, name, parents, dct)

    def __init__(cls, name, parents, dct, **kwargs):
        super().__init__(name, parents, dct)


class Record(metaclass=RecordMeta):
    @classmethod
    def size(cls):
        return cls.__struct__.size

    @classmethod
    def pack(cls, *values):
        return cls.__struct__.pack(*values)

    @classmethod
    def pack_many(cls, rows):
        return b''.join(cls.__struct__.pack(*row) for row in rows)

    @classmethod
    def unpack(cls, buffer, offset=0):
        return cls.__struct__.unpack_from(buffer, offset)

    @classmethod
    def unpack_many(cls, buffer, count, offset=0):
        size = cls.__struct__.size
        return [cls.__struct__.unpack_from(buffer, offset + i * size) for i in range(count)]

    @classmethod
    def dtype(cls):
        # Packed, no alignment padding, matching the struct layout.
        return np.dtype([(c.name, '<' + c.field_type.code) for c in cls.columns])

    @classmethod
    def to_array(cls, buffer):
        return np.frombuffer(buffer, dtype=cls.dtype())

    @classmethod
    def to_dict(cls):
        return {
            'name': cls.__recordname__,
            '__meta__': cls.__module__ + '.' + cls.__qualname__,
            'columns': [col._to_dict() for col in cls.columns]
        }

    @classmethod
    def check_schema(cls, data):
        """Raises :exc:`SchemaError` if a stored layout differs from this record."""
        stored = [Column.from_dict(dict(c)) for c in data['columns']]
        current = [(c.name, c.field_type) for c in cls.columns]
        if [(c.name, c.field_type) for c in stored] != current:
            raise SchemaError(f'Stored layout of {cls.__recordname__} differs from the current one, '
                              f'rebuild the index.')


def write_manifest(directory, data, records=()):
    """Atomically writes ``manifest.json``, embedding the given record layouts."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    p = directory / MANIFEST_FILE

    data = dict(data)
    data['records'] = {r.__recordname__: r.to_dict() for r in records}

    temp_file = p.with_name(f'{uuid.uuid4()}-{p.name}.tmp')
    with temp_file.open('w', encoding='utf-8') as tmp:
        json.dump(data, tmp, ensure_ascii=True, indent=4)

    temp_file.replace(p)
    log.info('Wrote manifest %s.', p)
    return p


def read_manifest(directory, kind=None, records=()):
    p = Path(directory) / MANIFEST_FILE
    try:
        with p.open('r', encoding='utf-8') as fp:
            data = json.load(fp)
    except OSError as e:
        raise SchemaError(f'Could not read {p}: {e}') from None
    except json.JSONDecodeError as e:
        raise SchemaError(f'{p} is not valid JSON: {e}') from None

    if kind is not None and data.get('kind') != kind:
        raise SchemaError(f'{directory} holds a {data.get("kind")!r} index, expected {kind!r}.')

    stored = data.get('records', {})
    for record in records:
        try:
            layout = stored[record.__recordname__]
        except KeyError:
            raise SchemaError(f'{p} has no layout for {record.__recordname__}, rebuild the index.') from None
        record.check_schema(layout)

    return data
