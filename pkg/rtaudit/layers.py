__all__ = (
    'Layer',
    'Palette',
    'FIGURE'
)

class Layer:
    """ drawing layer of a figure, rendered as one svg style class """
    __slots__ = ('name', 'layer', 'datatype', 'style')
    def __init__(self, name, layer, datatype, style=None):
        self.name = name
        self.layer = layer
        self.datatype = datatype
        self.style = dict(style or {})

    @property
    def key(self):
        return (self.layer, self.datatype)


class Palette:
    """ named set of layers with their svg styles """
    def __init__(self, name):
        self.name = name
        self.layers = dict()

    def __getitem__(self, key):
        if not key in self.layers:
            raise ValueError(f"invalid layer name '{key}' for palette '{self.name}'")
        return self.layers[key]

    def __iter__(self):
        return iter(self.layers.values())

    def define(self, name, layer, datatype, **style):
        self.layers[name] = Layer(name, layer, datatype, {k.replace('_', '-'): v for k, v in style.items()})

    def shape_styles(self):
        """ gdspy svg style dictionary for polygon layers """
        return {l.key: l.style for l in self if not l.name.startswith('Text')}

    def text_styles(self):
        """ gdspy svg style dictionary for label layers (keyed by layer, texttype) """
        return {l.key: l.style for l in self if l.name.startswith('Text')}


# congruent dashed, incongruent solid
FIGURE = Palette('Congruency figures')
FIGURE.define('Congruent',        1, 0, stroke='#1f4e79', fill='#1f4e79', fill_opacity='0.12', stroke_width='2', stroke_dasharray='8,5')  # congruent density curve
FIGURE.define('Incongruent',      2, 0, stroke='#b03a2e', fill='#b03a2e', fill_opacity='0.12', stroke_width='2')  # incongruent density curve
FIGURE.define('CongruentBars',    3, 0, stroke='#1f4e79', fill='#1f4e79', fill_opacity='0.25', stroke_width='0.5')  # congruent histogram bars
FIGURE.define('IncongruentBars',  4, 0, stroke='#b03a2e', fill='#b03a2e', fill_opacity='0.25', stroke_width='0.5')  # incongruent histogram bars
FIGURE.define('Axis',            10, 0, stroke='#000000', fill='#000000')  # axes and ticks
FIGURE.define('Marker',          11, 0, stroke='#555555', fill='#555555', fill_opacity='0.6')  # threshold marker
FIGURE.define('Text',            20, 0, fill='#000000', font_family='sans-serif', font_size='32px')  # tick and axis labels
FIGURE.define('TextTitle',       21, 0, fill='#000000', font_family='sans-serif', font_size='40px', font_weight='bold')  # figure title
