import contextvars
from typing import Any, Callable, Dict, Optional

_STORED_ATTRIBUTES: contextvars.ContextVar[Dict[str, str]] = contextvars.ContextVar(
    "_STORED_ATTRIBUTES", default={}
)


def add_attributes(
    attributes: Dict[str, str], callback: Optional[Callable[[], Any]] = None
) -> Any:
    """
    Adds or overwrites run attributes (command, suite, seed, ...) in the current context,
    then executes the callback if provided, returning the callback's result.
    Every log emitted inside the callback carries these attributes.
    """
    current_store = _STORED_ATTRIBUTES.get()
    updated_store = {**current_store, **attributes}
    token = _STORED_ATTRIBUTES.set(updated_store)

    ret = None
    try:
        if callback:
            ret = callback()
    finally:
        _STORED_ATTRIBUTES.reset(token)

    return ret


def get_attributes() -> Dict[str, str]:
    """
    Returns the attributes currently stored in the context.
    """
    return _STORED_ATTRIBUTES.get()


def merge_attributes(
    base: Dict[str, str], attributes: Dict[str, Any]
) -> Dict[str, Any]:
    """Explicit attributes win over context attributes, which win over config attributes."""
    merged: Dict[str, Any] = dict(base)
    merged.update(get_attributes())
    merged.update(attributes)
    return merged
