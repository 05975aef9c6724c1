"""Exception hierarchy shared by every module of the toolkit."""


class FragreconError(Exception):
    """Base class for all toolkit errors."""


class EmptyFragment(FragreconError, ValueError):
    def __init__(self, index: int | None = None):
        self.index = index
        where = "" if index is None else f" at index {index}"
        super().__init__(f"empty fragment{where}")


class InvalidByte(FragreconError, ValueError):
    def __init__(self, position: int, value: int, fragment: int | None = None):
        self.position = position
        self.value = value
        self.fragment = fragment
        where = "" if fragment is None else f" in fragment {fragment}"
        super().__init__(f"invalid byte {value!r} at position {position}{where}")


class OffsetOutOfRange(FragreconError, IndexError):
    def __init__(self, offset: int, length: int):
        self.offset = offset
        self.length = length
        super().__init__(f"offset {offset} outside [0, {length})")


class SharedBreakpoint(FragreconError, ValueError):
    def __init__(self, position: int):
        self.position = position
        super().__init__(f"both cuttings break at position {position}")


class PositionOutOfRange(FragreconError, ValueError):
    def __init__(self, position: int, length: int):
        self.position = position
        self.length = length
        super().__init__(f"cut position {position} not in (0, {length})")


class TooManyCuts(FragreconError, ValueError):
    def __init__(self, length: int, m: int, n: int):
        self.length = length
        self.m = m
        self.n = n
        super().__init__(f"{m} + {n} cuts do not fit in {max(length - 1, 0)} interior positions")


class IllegalMove(FragreconError, ValueError):
    pass


class Unsolvable(FragreconError):
    """The search space was exhausted without finding a reconstruction."""

    def __init__(self, reason: str = "search exhausted", stats=None):
        self.reason = reason
        self.stats = stats
        super().__init__(reason)


class LimitExceeded(FragreconError):
    def __init__(self, stats):
        self.stats = stats
        super().__init__(f"search limit exceeded after {stats.nodes_expanded} nodes")


class TooLarge(FragreconError, ValueError):
    def __init__(self, k: int, limit: int):
        self.k = k
        self.limit = limit
        super().__init__(f"{k} fragments exceed the exact-search limit of {limit}")


class Overflow(FragreconError, OverflowError):
    pass


class TextTooLarge(FragreconError, ValueError):
    def __init__(self, length: int):
        self.length = length
        super().__init__(f"text of length {length} exceeds 2**31 - 1")
