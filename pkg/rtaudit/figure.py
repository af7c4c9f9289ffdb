""" plot canvas: layered shapes and labels rendered to svg through gdspy """

import io

import gdspy
import xmltodict

from .layers import FIGURE, Palette
from .shape import Shape

__all__ = (
    'Figure',
)

SCALING = 10    # svg pixels per figure unit


class Figure:
    """
        Collects shapes and labels per layer and renders them as a self-contained svg
    """
    __slots__ = ('name', 'palette', '__shapes', '__labels')
    def __init__(self, name, palette: Palette = FIGURE):
        self.name = name
        self.palette = palette
        self.__shapes = []
        self.__labels = []

    def insert(self, layer, element):
        """ add a copy of a shape (or a point list) on the named layer """
        if isinstance(element, list):
            element = Shape(element)

        if not isinstance(element, Shape):
            raise ValueError('invalid element supplied to insert(), must be a Shape or a list of points')

        # always grab a copy to avoid referencing
        element = element.copy()

        self.__shapes.append((self.palette[layer], element))

    def label(self, layer, text, position, anchor='o'):
        """ add a text label anchored at position ('n', 'sw', 'o', ...) """
        self.__labels.append((self.palette[layer], str(text), tuple(position), anchor))

    def get_shapes(self):
        return self.__shapes

    def get_labels(self):
        return self.__labels

    def to_svg(self, title='', description='') -> bytes:
        """ render through gdspy, then attach <title> and <desc> metadata """
        cell = gdspy.Cell(self.name, exclude_from_current=True)
        for layer, element in self.__shapes:
            cell.add(gdspy.Polygon(element.xy, layer.layer, layer.datatype))

        for layer, text, position, anchor in self.__labels:
            cell.add(gdspy.Label(text, position, anchor=anchor, layer=layer.layer, texttype=layer.datatype))

        buf = io.StringIO()
        cell.write_svg(buf, scaling=SCALING, style=self.palette.shape_styles(),
                       fontstyle=self.palette.text_styles(), background='#ffffff', pad='3%')

        doc = xmltodict.parse(buf.getvalue())
        svg = doc['svg']
        attrs = {k: v for k, v in svg.items() if k.startswith('@')}
        body = {k: v for k, v in svg.items() if not k.startswith('@')}
        doc['svg'] = dict(attrs, title=title, desc=description, **body)

        return xmltodict.unparse(doc, pretty=True).encode('utf-8')
