import copy

__all__ = (
    'Shape',
    'Rect',
    'RectWH',
    'HLine',
    'VLine',
    'Curve'
)

class Shape:
    """ Base class for plot primitives which translate to simple polygons """
    __slots__ = ('xy',)
    def __init__(self, xy=()):
        self.xy = [(float(x), float(y)) for x, y in xy]

    def __len__(self):
        return len(self.xy)

    def copy(self):
        return copy.deepcopy(self)


class Rect(Shape):
    """ axis-aligned box between two opposite corners """
    def __init__(self, p1, p2):
        (x1, y1), (x2, y2) = p1, p2
        super().__init__([(x1, y1), (x2, y1), (x2, y2), (x1, y2)])


class RectWH(Rect):
    """ box of width w and height h above the corner ll; histogram bars """
    def __init__(self, ll, w, h):
        x, y = ll
        super().__init__((x, y), (x + w, y + h))


class HLine(Rect):
    """ horizontal stroke of thickness t from x1 to x2 at height y """
    def __init__(self, x1, x2, y, t=0.2):
        super().__init__((x1, y - t/2), (x2, y + t/2))


class VLine(Rect):
    """ vertical stroke of thickness t from y1 to y2 at x """
    def __init__(self, x, y1, y2, t=0.2):
        super().__init__((x - t/2, y1), (x + t/2, y2))


class Curve(Shape):
    """ area under a sampled curve, closed along the baseline """
    def __init__(self, xs, ys, baseline=0.0):
        xs, ys = list(xs), list(ys)
        if len(xs) != len(ys) or len(xs) < 2:
            raise ValueError('curve needs at least two (x, y) samples of equal length')

        xy = [(xs[0], baseline)]
        xy.extend(zip(xs, ys))
        xy.append((xs[-1], baseline))
        super().__init__(xy)
