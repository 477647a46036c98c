from __future__ import annotations

from functools import partial
from typing import Any, Callable, List, Type, get_origin

from attrs import fields, has, resolve_types
from cattrs import Converter
from cattrs.gen import make_dict_structure_fn, make_dict_unstructure_fn, override
from cattrs.gen._consts import AttributeOverride

__all__ = [
    "register_hooks",
    "structure",
    "unstructure",
]


def is_circleLib_class(cls: Type[Any]) -> bool:
    mod: str = getattr(cls, "__module__", "")
    return mod.split(".")[0] == "circleLib"


def is_circleLib_attrs_class(cls: Type[Any]) -> bool:
    return is_circleLib_class(cls) and (has(cls) or has(get_origin(cls)))


def is_circleLib_class_with_custom_unstructure(cls: Type[Any]) -> bool:
    return is_circleLib_class(cls) and hasattr(cls, "_unstructure")


def is_circleLib_class_with_custom_structure(cls: Type[Any]) -> bool:
    return is_circleLib_class(cls) and hasattr(cls, "_structure")


def format_float(v: float) -> str:
    """Shortest decimal string that reads back as the same float.

    >>> format_float(0.1)
    '0.1'
    >>> format_float(float("inf"))
    'inf'
    """
    # numpy scalars repr as 'np.float64(...)', go through the builtin first
    return repr(float(v))


def register_hooks(conv: Converter, decimal_strings: bool = True) -> None:
    def attrs_hook_factory(
        cls: Type[Any], gen_fn: Callable[..., Callable[..., Any]], structuring: bool
    ) -> Callable[..., Any]:
        base = get_origin(cls)
        if base is None:
            base = cls
        attribs = fields(base)
        # PEP563 postponed annotations need resolving as we check Attribute.type below
        resolve_types(base)
        kwargs: dict[str, bool | AttributeOverride] = {
            "_cattrs_detailed_validation": conv.detailed_validation
        }
        if structuring:
            kwargs["_cattrs_forbid_extra_keys"] = conv.forbid_extra_keys
            kwargs["_cattrs_prefer_attrib_converters"] = conv._prefer_attrib_converters
        else:
            kwargs["_cattrs_omit_if_default"] = conv.omit_if_default
        for a in attribs:
            if a.type in conv.type_overrides:
                attrib_override = conv.type_overrides[a.type]
            else:
                # Optional attributes (None default) are always omitted when unset;
                # 'omit_if_default' in Attribute.metadata overrides this per field.
                attrib_override = override(
                    omit_if_default=a.metadata.get(
                        "omit_if_default", a.default is None or None
                    ),
                    rename=a.metadata.get(
                        "rename_attr", a.name[1:] if a.name[0] == "_" else None
                    ),
                    omit=not a.init,
                )
            kwargs[a.name] = attrib_override

        return gen_fn(cls, conv, **kwargs)

    def custom_unstructure_hook_factory(cls: Type[Any]) -> Callable[[Any], Any]:
        return partial(cls._unstructure, converter=conv)

    def custom_structure_hook_factory(cls: Type[Any]) -> Callable[[Any, Any], Any]:
        return partial(cls._structure, converter=conv)

    conv.register_unstructure_hook_factory(
        is_circleLib_attrs_class,
        partial(attrs_hook_factory, gen_fn=make_dict_unstructure_fn, structuring=False),
    )
    conv.register_unstructure_hook_factory(
        is_circleLib_class_with_custom_unstructure,
        custom_unstructure_hook_factory,
    )
    conv.register_structure_hook_factory(
        is_circleLib_attrs_class,
        partial(attrs_hook_factory, gen_fn=make_dict_structure_fn, structuring=True),
    )
    conv.register_structure_hook_factory(
        is_circleLib_class_with_custom_structure,
        custom_structure_hook_factory,
    )

    def structure_float(v: Any, _: Any) -> float:
        return float(v)

    if decimal_strings:

        def unstructure_float(v: float) -> str:
            return format_float(v)

        def unstructure_complex(v: complex) -> List[str]:
            return [format_float(v.real), format_float(v.imag)]

    else:

        def unstructure_float(v: float) -> float:  # type: ignore[misc]
            return float(v)

        def unstructure_complex(v: complex) -> List[float]:  # type: ignore[misc]
            return [float(v.real), float(v.imag)]

    def structure_complex(v: Any, _: Any) -> complex:
        re, im = v
        return complex(float(re), float(im))

    conv.register_unstructure_hook(float, unstructure_float)
    conv.register_structure_hook(float, structure_float)
    conv.register_unstructure_hook(complex, unstructure_complex)
    conv.register_structure_hook(complex, structure_complex)


default_converter = Converter(
    omit_if_default=True,
    forbid_extra_keys=True,
    prefer_attrib_converters=False,
)
register_hooks(default_converter, decimal_strings=True)

structure = default_converter.structure
unstructure = default_converter.unstructure

# same as default_converter but keeps floats native, msgpack stores them exactly
binary_converter = Converter(
    omit_if_default=True,
    forbid_extra_keys=True,
    prefer_attrib_converters=False,
)
register_hooks(binary_converter, decimal_strings=False)
