from textwrap import dedent

import numpy as np
import pytest

from errors import ParseError, SerializationError
from geometry import Direction8
from models import DecorClass, DecorInstance, Door, Room, RoomLabel, SemanticModel, from_xml, to_xml
from raster import Box


def small_model():
    return SemanticModel(
        rooms=(
            Room(
                1, RoomLabel.KITCHEN, [(24, 24), (135, 24), (135, 135), (24, 135)], 125.44, (2,),
                (DecorInstance(DecorClass.STOVE, Box(29, 40, 52, 63), direction=Direction8.NW),),
                Direction8.NW
            ),
            Room(2, RoomLabel.HALL, [(139, 24), (250, 24), (250, 135), (139, 135)], 123.2, (1,)),
        ),
        doors=(
            Door(1, Box(18, 74, 47, 105), (90.5, 21.5), (1,)),
            Door(2, Box(60, 120, 90, 150), (137, 75.5), (2, 1)),
        ),
        entry_door=1
    )


SMALL_MODEL_XML = dedent("""\
    <?xml version="1.0" encoding="UTF-8"?>
    <RoomDetails>
      <Room>
        <RoomID>1</RoomID>
        <RoomLabel>KITCHEN</RoomLabel>
        <RoomArea>125.44</RoomArea>
        <RoomCoordinates>24,24 135,24 135,135 24,135</RoomCoordinates>
        <RoomLocation>NW</RoomLocation>
        <RoomNeighbors>2</RoomNeighbors>
        <RoomDecors>
          <Decor class="stove" cx="51.5" cy="40.5" dir="NW" bbox="40,29,63,52"/>
        </RoomDecors>
      </Room>
      <Room>
        <RoomID>2</RoomID>
        <RoomLabel>HALL</RoomLabel>
        <RoomArea>123.20</RoomArea>
        <RoomCoordinates>139,24 250,24 250,135 139,135</RoomCoordinates>
        <RoomLocation/>
        <RoomNeighbors>1</RoomNeighbors>
        <RoomDecors/>
      </Room>
      <Doors entry="1">
        <Door id="1" cx="90.5" cy="21.5" bbox="74,18,105,47" rooms="1"/>
        <Door id="2" cx="137" cy="75.5" bbox="120,60,150,90" rooms="1 2"/>
      </Doors>
    </RoomDetails>
""")


def pick(rng, options):
    return options[int(rng.integers(len(options)))]


def random_model(rng):
    count = int(rng.integers(1, 6))
    rooms = []
    for i in range(1, count + 1):
        left = 100 * (i - 1)
        decors = []
        for _ in range(int(rng.integers(0, 4))):
            top, x = (int(v) for v in rng.integers(5, 70, 2))
            box = Box(top, left + x, top + int(rng.integers(0, 20)), left + x + int(rng.integers(0, 20)))
            direction = pick(rng, list(Direction8) + [None])
            decors.append(DecorInstance(DecorClass(int(rng.integers(1, 13))), box, direction=direction))
        rooms.append(Room(
            id=i,
            label=pick(rng, list(RoomLabel) + [None]),
            polygon=[(left, 0), (left + 99, 0), (left + 99, 99), (left, 99)],
            area_sqft=float(rng.uniform(1, 500)),
            neighbors=[j for j in (i - 1, i + 1) if 1 <= j <= count],
            decors=decors,
            global_dir=pick(rng, list(Direction8) + [None])
        ))
    doors = [Door(1, Box(40, 0, 60, 5), (2.5, 50.0), (1,))]
    for i in range(1, count):
        x = 100 * i
        doors.append(Door(i + 1, Box(40, x - 3, 60, x + 2), (x - 0.5, 50.0), (i, i + 1)))
    return SemanticModel(tuple(rooms), tuple(doors), 1)


def test_golden_xml():
    assert to_xml(small_model()).decode('utf-8') == SMALL_MODEL_XML
    assert to_xml(small_model()) == to_xml(small_model())


def test_round_trip():
    assert from_xml(to_xml(small_model())) == small_model()

    rng = np.random.default_rng(7)
    for _ in range(100):
        model = random_model(rng)
        assert from_xml(to_xml(model)) == model


def test_empty_model():
    data = to_xml(SemanticModel())
    assert data == b'<?xml version="1.0" encoding="UTF-8"?>\n<RoomDetails/>\n'
    assert from_xml(data) == SemanticModel()


def test_models_normalize_fields():
    room = Room(3, 2, [[0, 0], [1, 0], [1, 1]], 1.005, (5, 4))
    assert room.label == RoomLabel.BATHROOM
    assert room.polygon == ((0, 0), (1, 0), (1, 1))
    assert room.neighbors == (4, 5)

    decor = DecorInstance(4, Box(0, 0, 3, 5))
    assert decor.cls is DecorClass.TABLE
    assert decor.center == (2.5, 1.5)

    assert DecorClass.LARGE_SOFA.title == 'large sofa'
    assert DecorClass.from_code('twin_sink') is DecorClass.TWIN_SINK
    assert RoomLabel.ENTRY.title == 'entry'


def test_door_adjacency():
    adjacency = small_model().door_adjacency()
    assert adjacency.tolist() == [[0, 1], [1, 0]]


def test_refuses_invalid_model():
    model = small_model()
    asymmetric = SemanticModel(
        (model.rooms[0], Room(2, RoomLabel.HALL, model.rooms[1].polygon, 1.0)),
        model.doors, 1
    )
    with pytest.raises(SerializationError, match='not symmetric'):
        to_xml(asymmetric)

    with pytest.raises(SerializationError, match='entry door 7'):
        to_xml(SemanticModel(model.rooms, model.doors, 7))

    misplaced = DecorInstance(DecorClass.BED, Box(500, 500, 510, 510))
    room = Room(1, RoomLabel.BEDROOM, model.rooms[0].polygon, 1.0, decors=(misplaced,))
    with pytest.raises(SerializationError, match='outside room 1'):
        to_xml(SemanticModel((room,)))

    flat = Room(1, RoomLabel.HALL, [(0, 0), (50, 0), (100, 0)], 1.0)
    with pytest.raises(SerializationError, match='room 1 polygon has no area'):
        to_xml(SemanticModel((flat,)))


@pytest.mark.parametrize('document, path', [
    (
        b'<RoomDetails><Room><RoomID>1</RoomID><RoomLabel>HALL</RoomLabel><RoomArea>1</RoomArea>'
        b'<RoomCoordinates>0,0 9,0 9,9</RoomCoordinates><RoomLocation>UP</RoomLocation></Room></RoomDetails>',
        'Room/RoomLocation'
    ),
    (
        b'<RoomDetails><Room><RoomID>1</RoomID><RoomLabel>HALL</RoomLabel><RoomArea>1</RoomArea>'
        b'<RoomCoordinates>0,0 9,0 9,9</RoomCoordinates>'
        b'<RoomDecors><Decor class="sink" cx="3" cy="3" dir="NNW"/></RoomDecors></Room></RoomDetails>',
        'Room/RoomDecors/Decor'
    ),
    (b'<RoomDetails><Room>', 'RoomDetails'),
    (b'<Rooms/>', 'Rooms'),
    (b'<RoomDetails><Garage/></RoomDetails>', 'Garage'),
    (
        b'<RoomDetails><Room><RoomID>1</RoomID><RoomLabel>HALL</RoomLabel>'
        b'<RoomCoordinates>0,0 9,0 9,9</RoomCoordinates></Room></RoomDetails>',
        'Room/RoomArea'
    ),
    (
        b'<RoomDetails><Room><RoomID>1</RoomID><RoomLabel>GARAGE</RoomLabel><RoomArea>1</RoomArea>'
        b'<RoomCoordinates>0,0 9,0 9,9</RoomCoordinates></Room></RoomDetails>',
        'Room/RoomLabel'
    ),
    (
        b'<RoomDetails><Room><RoomID>one</RoomID><RoomLabel>HALL</RoomLabel><RoomArea>1</RoomArea>'
        b'<RoomCoordinates>0,0 9,0 9,9</RoomCoordinates></Room></RoomDetails>',
        'Room/RoomID'
    ),
    (
        b'<RoomDetails><Room><RoomID>1</RoomID><RoomLabel>HALL</RoomLabel><RoomArea>1</RoomArea>'
        b'<RoomCoordinates>0,0 9,0 9,9</RoomCoordinates>'
        b'<RoomDecors><Decor class="piano" cx="3" cy="3"/></RoomDecors></Room></RoomDetails>',
        'Room/RoomDecors/Decor'
    ),
])
def test_parse_errors(document, path):
    with pytest.raises(ParseError) as error:
        from_xml(document)
    assert error.value.path == path
    assert str(error.value).startswith(path)


def test_parse_minimal_room():
    model = from_xml(
        b'<RoomDetails><Room><RoomID>4</RoomID><RoomLabel>bedroom</RoomLabel><RoomArea>12.5</RoomArea>'
        b'<RoomCoordinates>0,0 9,0 9,9</RoomCoordinates></Room></RoomDetails>'
    )
    room = model.room(4)
    assert room.label is RoomLabel.BEDROOM
    assert room.area_sqft == 12.5
    assert room.global_dir is None
    assert room.neighbors == ()
    assert model.entry_door is None
