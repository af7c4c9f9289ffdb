import enum

__all__ = (
    'Parameter',
    'Parameterizable'
)

class ParameterType(property):
    pass

class ParameterizableType(type):
    def __new__(mcs, name, bases, namespace, **kwargs):
        cls = super().__new__(mcs, name, bases, namespace, **kwargs)

        # inherit parameters from bases, then collect the ones declared here
        params = dict()
        for base in reversed(cls.__mro__[1:]):
            params.update(getattr(base, '__rtparams__', {}))

        for key, prop in namespace.items():
            if isinstance(prop, ParameterType):
                prop.name = key
                params[key] = prop

        cls.__rtparams__ = params
        return cls


def _rebuild(cls, values):
    return cls(**values)


class Parameter(ParameterType):
    """ validated, documented parameter of a Parameterizable class

    input:
        default - value used when the keyword is not supplied
        type - expected python type; ints promote to float, enums coerce from their value
        required - the keyword must be supplied at construct time
        fvalidate - predicate the value must satisfy
        rule - human-readable statement of fvalidate, used in error messages
    """
    def __init__(self, default=None, type=None, required=False, fvalidate=None, rule='', doc=''):
        super().__init__(fget=self.get, fset=self.set, doc=doc)

        self.name = None    # assigned by the metaclass

        self.type = type
        self.default = default
        self.required = required
        self.fvalidate = fvalidate
        self.rule = rule

    def __str__(self) -> str:
        return f"Parameter({self.name}): {self.__doc__}"

    def get(self, obj):
        return obj.__rtvalues__[self.name]

    def coerce(self, value):
        if self.type is None or value is None:
            return value

        if isinstance(self.type, type) and issubclass(self.type, enum.Enum):
            if isinstance(value, self.type):
                return value
            try:
                return self.type(value)
            except ValueError:
                choices = ', '.join(str(m.value) for m in self.type)
                raise ValueError(f"invalid value '{value}' for parameter '{self.name}', expected one of: {choices}")

        if self.type is float and isinstance(value, int) and not isinstance(value, bool):
            return float(value)

        if self.type is tuple and isinstance(value, list):
            return tuple(value)

        if not type(value) is self.type:
            raise ValueError(f"invalid type for parameter '{self.name}', type must be '{self.type.__name__}'")

        return value

    def set(self, obj, value):
        if obj.__dict__.get('_frozen', False):
            raise AttributeError(f"parameter '{self.name}' is read-only, use replace()")

        value = self.coerce(value)

        if value is not None and callable(self.fvalidate):
            if not self.fvalidate(value):
                extra = f", must satisfy '{self.rule}'" if self.rule else ''
                raise ValueError(f"invalid value {value!r} supplied for '{self.name}'{extra}")

        obj.__rtvalues__[self.name] = value


class Parameterizable(metaclass=ParameterizableType):
    """
        Immutable parameter set built from keyword arguments
    """
    def __init__(self, **kwargs):
        unknown = set(kwargs) - set(self.__rtparams__)
        if unknown:
            raise TypeError(f"__init__() got unexpected keyword argument(s): {', '.join(sorted(unknown))}")

        self.__dict__['__rtvalues__'] = dict()
        for name, param in self.__rtparams__.items():
            if name in kwargs:
                param.set(self, kwargs[name])

            elif param.required:
                raise TypeError(f"__init__() missing required keyword argument: '{name}'")

            else:
                param.set(self, param.default)

        self.__dict__['_frozen'] = True

    def __setattr__(self, key, value):
        if key in self.__rtparams__:
            return super().__setattr__(key, value)
        raise AttributeError(f"'{type(self).__name__}' has no parameter '{key}'")

    def __eq__(self, other):
        return type(self) is type(other) and self.__rtvalues__ == other.__rtvalues__

    def __hash__(self):
        return hash((type(self).__name__, tuple(self.__rtvalues__.items())))

    def __repr__(self):
        args = ', '.join(f"{k}={v!r}" for k, v in self.__rtvalues__.items())
        return f"{type(self).__name__}({args})"

    def __reduce__(self):
        return (_rebuild, (type(self), dict(self.__rtvalues__)))

    def as_dict(self):
        """ plain-value dictionary, enums replaced by their values """
        out = dict()
        for key, value in self.__rtvalues__.items():
            if isinstance(value, enum.Enum):
                value = value.value
            elif isinstance(value, tuple):
                value = list(value)
            out[key] = value
        return out

    def replace(self, **changes):
        """ copy with some parameters changed (validated again) """
        values = dict(self.__rtvalues__)
        values.update(changes)
        return type(self)(**values)

    @classmethod
    def parameters(cls):
        return dict(cls.__rtparams__)
