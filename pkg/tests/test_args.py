from mahlerbound.args import (
    Assignment,
    Flag,
    Value,
    is_kebab_case,
    is_negative_value,
    is_snake_case,
    parse_arguments,
    parse_double_dash_assignment,
    parse_double_dash_flag,
    parse_single_dash_assignment,
    parse_single_dash_flag,
    to_snake_case,
)


def value(text: str) -> Value:
    return Value(value=text, full=text)


def test_is_kebab_case():
    assert is_kebab_case("deg-max")
    assert is_kebab_case("histogram-csv")
    assert is_kebab_case("unit-endpoints-only")
    assert not is_kebab_case("")
    assert not is_kebab_case("deg_max")
    assert not is_kebab_case("degMax")
    assert not is_kebab_case("DEG-MAX")
    assert not is_kebab_case("deg max")
    assert not is_kebab_case("deg-")
    assert not is_kebab_case("-deg")
    assert not is_kebab_case("deg--max")


def test_is_snake_case():
    assert is_snake_case("deg_max")
    assert is_snake_case("all_instances")
    assert not is_snake_case("")
    assert not is_snake_case("deg-max")
    assert not is_snake_case("DegMax")
    assert not is_snake_case("deg_")
    assert not is_snake_case("_deg")
    assert not is_snake_case("deg__max")


def test_to_snake_case():
    assert to_snake_case("deg-max") == "deg_max"
    assert to_snake_case("min_alpha") == "min_alpha"
    assert to_snake_case("p") == "p"


def test_is_negative_value():
    assert is_negative_value("-2")
    assert is_negative_value("-1,0,1")
    assert is_negative_value("-x^3+x+1")
    assert is_negative_value("-x")
    assert is_negative_value("-x+1")
    assert is_negative_value("-x*2")
    assert not is_negative_value("-v")
    assert not is_negative_value("--deg-max")
    assert not is_negative_value("-xv")
    assert not is_negative_value("x^3-x-1")


def test_parse_single_dash_flag():
    assert list(parse_single_dash_flag("-v")) == [Flag(sentinel="-", name="v", full="-v")]
    assert list(parse_single_dash_flag("-")) == []
    assert list(parse_single_dash_flag("-p=256")) == []
    assert list(parse_single_dash_flag("-5")) == []
    assert list(parse_single_dash_flag("-x")) == []
    assert list(parse_single_dash_flag("")) == []
    assert list(parse_single_dash_flag("measure")) == []


def test_parse_double_dash_flag():
    assert list(parse_double_dash_flag("--deg-max")) == [
        Flag(sentinel="--", name="deg-max", full="--deg-max")
    ]
    assert list(parse_double_dash_flag("--all_instances")) == [
        Flag(sentinel="--", name="all_instances", full="--all_instances")
    ]
    assert list(parse_double_dash_flag("--c")) == [Flag(sentinel="--", name="c", full="--c")]
    assert list(parse_double_dash_flag("--")) == []
    assert list(parse_double_dash_flag("--6")) == []
    assert list(parse_double_dash_flag("--deg-max=6")) == []
    assert list(parse_double_dash_flag("--deg_max-x")) == []
    assert list(parse_double_dash_flag("-deg")) == []


def test_parse_single_dash_assignment():
    assert list(parse_single_dash_assignment("-p=256")) == [
        Assignment(sentinel="-", name="p", flag="-p", delimiter="=", value="256", full="-p=256")
    ]
    assert list(parse_single_dash_assignment("-w=")) == [
        Assignment(sentinel="-", name="w", flag="-w", delimiter="=", value="", full="-w=")
    ]
    assert list(parse_single_dash_assignment("-p")) == []
    assert list(parse_single_dash_assignment("-5=1")) == []
    assert list(parse_single_dash_assignment("")) == []


def test_parse_double_dash_assignment():
    assert list(parse_double_dash_assignment("--c=-2")) == [
        Assignment(sentinel="--", name="c", flag="--c", delimiter="=", value="-2", full="--c=-2")
    ]
    assert list(parse_double_dash_assignment("--format=plain")) == [
        Assignment(
            sentinel="--",
            name="format",
            flag="--format",
            delimiter="=",
            value="plain",
            full="--format=plain",
        )
    ]
    assert list(parse_double_dash_assignment("--corpus=a=b")) == [
        Assignment(
            sentinel="--",
            name="corpus",
            flag="--corpus",
            delimiter="=",
            value="a=b",
            full="--corpus=a=b",
        )
    ]
    assert list(parse_double_dash_assignment("--deg-max")) == []
    assert list(parse_double_dash_assignment("--5=1")) == []
    assert list(parse_double_dash_assignment("--a!=1")) == []
    assert list(parse_double_dash_assignment("")) == []


def test_parse_arguments():
    assert list(parse_arguments(["-v", "measure", "x^3-x-1", "--precision=256"])) == [
        Flag(sentinel="-", name="v", full="-v"),
        value("measure"),
        value("x^3-x-1"),
        Assignment(
            sentinel="--",
            name="precision",
            flag="--precision",
            delimiter="=",
            value="256",
            full="--precision=256",
        ),
    ]


def test_parse_arguments_negative_values():
    assert list(parse_arguments(["family", "--c", "-2", "--b", "-3"])) == [
        value("family"),
        Flag(sentinel="--", name="c", full="--c"),
        value("-2"),
        Flag(sentinel="--", name="b", full="--b"),
        value("-3"),
    ]
    assert list(parse_arguments(["bound", "-x^5+x+1"])) == [value("bound"), value("-x^5+x+1")]
    assert list(parse_arguments(["bound", "-1,0,1"])) == [value("bound"), value("-1,0,1")]


def test_parse_arguments_end_of_options():
    assert list(parse_arguments(["measure", "--", "--odd", "-v"])) == [
        value("measure"),
        value("--odd"),
        value("-v"),
    ]
    assert list(parse_arguments(["--"])) == []


def test_parse_arguments_unparseable_is_value():
    assert list(parse_arguments(["-vq", "--Deg"])) == [value("-vq"), value("--Deg")]
