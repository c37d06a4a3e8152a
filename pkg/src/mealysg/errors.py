class ExceedsCap(RuntimeError):
    """An enumeration outgrew its cap; ``partial`` holds what was found."""

    def __init__(self, cap: int, partial=None, what: str = "enumeration"):
        self.cap = cap
        self.partial = partial
        super().__init__(f"{what} exceeded cap {cap}")
