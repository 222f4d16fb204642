from __future__ import annotations

import typing

if typing.TYPE_CHECKING:
    from workbench import Instance, Workbench


class Engine:
    """A query engine the workbench can load, benchmark and verify.

    Subclasses set ``name`` and implement :meth:`prepare`, returning the
    structure they answer from (built on first use for an instance), and
    :meth:`answer`.
    """
    name = None

    def __init__(self, workbench: Workbench):
        self._workbench = workbench
        self.logger = self.workbench.logger

    @property
    def workbench(self) -> 'Workbench':
        """
        :return: The workbench instance associated with this engine.
        """
        return self._workbench

    @classmethod
    def setup(cls, workbench: Workbench):
        workbench.add_engine(cls(workbench))

    def prepare(self, instance: Instance):
        raise NotImplementedError()

    def store(self, instance: Instance):
        """The block store whose counters measure this engine."""
        return self.prepare(instance).store

    def answer(self, instance: Instance, query) -> bool:
        raise NotImplementedError()

    def __repr__(self):
        return f"<reach.{self.__class__.__name__} name={self.name!r}>"
