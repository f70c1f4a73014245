import io
import json
from datetime import datetime

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weekfit import (
    ComponentId,
    ComponentParams,
    CsvFormatError,
    GapError,
    ModelFormatError,
    RawRecord,
    SeriesTooShortError,
    SplitSpec,
    TrafficSeries,
    WeekfitError,
    WeeklyModel,
    aggregate_hourly,
    bundled_model,
    load_csv,
    load_model,
    save_model,
    split,
    write_series_csv,
    write_timestamp_csv,
)

# transcription of the bundled Guangzhou reference set, (rate, variance, time)
GUANGZHOU_TABLE = {
    "mw": (4626, 3.10, 12.14),
    "aw": (3839, 3.91, 17.35),
    "ew": (2136, 6.63, 22.18),
    "msa": (3612, 2.89, 12.09),
    "asa": (2989, 3.14, 16.55),
    "esa": (2356, 5.78, 21.60),
    "msu": (2866, 2.81, 11.95),
    "asu": (2759, 4.13, 16.47),
    "esu": (2252, 6.39, 22.15),
}

params_st = st.builds(
    ComponentParams,
    peak_rate=st.floats(0.0, 1e6),
    peak_time=st.floats(0.0, 24.0, exclude_max=True),
    variance=st.floats(1e-3, 1e3),
)
model_st = st.builds(
    lambda ps: WeeklyModel(dict(zip(ComponentId, ps))),
    st.lists(params_st, min_size=9, max_size=9),
)


class TestLoadCsv:
    def test_single_row(self):
        records = load_csv(io.StringIO("timestamp,value\n2013-11-04T00:00:00,120\n"))
        assert records == [RawRecord(datetime(2013, 11, 4), 120.0)]

    def test_header_only(self):
        assert load_csv(io.StringIO("timestamp,value\n")) == []

    def test_missing_header(self):
        with pytest.raises(CsvFormatError, match="header"):
            load_csv(io.StringIO("2013-11-04T00:00:00,120\n"))

    def test_negative_value_names_line(self):
        stream = io.StringIO("timestamp,value\n2013-11-04T00:00:00,3\n2013-11-04T00:10:00,-5\n")
        with pytest.raises(CsvFormatError, match="line 3") as info:
            load_csv(stream)
        assert info.value.line == 3

    def test_bad_timestamp_names_line(self):
        with pytest.raises(CsvFormatError, match="line 2"):
            load_csv(io.StringIO("timestamp,value\nyesterday,3\n"))

    def test_bad_value(self):
        with pytest.raises(CsvFormatError, match="value"):
            load_csv(io.StringIO("timestamp,value\n2013-11-04T00:00:00,many\n"))

    def test_from_path(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("timestamp,value\n2013-11-04T05:30:00,7.5\n")
        records = load_csv(path)
        assert records[0].value == 7.5


class TestAggregateHourly:
    def test_sums_subhourly_records(self):
        records = [
            RawRecord(datetime(2013, 11, 4, 0, 10 * i), float(i + 1)) for i in range(6)
        ]
        series = aggregate_hourly(records)
        assert len(series) == 1
        assert series.values[0] == 21.0

    def test_monday_maps_to_day_one(self):
        # 2013-11-04 is a Monday
        assert datetime(2013, 11, 4).weekday() == 0
        series = aggregate_hourly([RawRecord(datetime(2013, 11, 4), 1.0)])
        assert series.day_indices()[0] == 1
        assert series.hour_indices()[0] == 0

    def test_week_start_alignment(self):
        # 2013-11-03 is a Sunday; under a Sunday-start week it becomes day 1
        series = aggregate_hourly(
            [RawRecord(datetime(2013, 11, 3), 1.0)],
            SplitSpec(week_start="sunday"),
        )
        assert series.day_indices()[0] == 1

    def test_gap_names_missing_hour(self):
        records = [
            RawRecord(datetime(2013, 11, 4, 4), 1.0),
            RawRecord(datetime(2013, 11, 4, 6), 1.0),
        ]
        with pytest.raises(GapError, match="05:00"):
            aggregate_hourly(records)

    def test_order_insensitive(self):
        rng = np.random.default_rng(0)
        records = [
            RawRecord(datetime(2013, 11, 4, h, m), float(rng.uniform(0, 5)))
            for h in range(12)
            for m in (0, 17, 45)
        ]
        forward = aggregate_hourly(records)
        shuffled = list(records)
        rng.shuffle(shuffled)
        assert aggregate_hourly(shuffled) == forward

    def test_conserves_total_mass(self):
        rng = np.random.default_rng(1)
        records = [
            RawRecord(datetime(2013, 11, 4, h, m), float(rng.uniform(0, 5)))
            for h in range(24)
            for m in (0, 30)
        ]
        series = aggregate_hourly(records)
        assert float(series.values.sum()) == pytest.approx(
            sum(r.value for r in records), rel=1e-12
        )

    def test_empty_input(self):
        with pytest.raises(WeekfitError, match="no records"):
            aggregate_hourly([])


class TestSplit:
    def test_three_weeks_default_spec(self):
        series = TrafficSeries(np.arange(1.0, 505.0), 0)
        train, test = split(series)
        assert (len(train), len(test)) == (336, 168)
        assert train.start == 0 and test.start == 336

    def test_rejects_empty_test(self):
        series = TrafficSeries(np.ones(336), 0)
        with pytest.raises(SeriesTooShortError):
            split(series, SplitSpec(train_weeks=2))

    def test_partition_reassembles(self):
        rng = np.random.default_rng(2)
        series = TrafficSeries(rng.uniform(0, 9, 400), 7)
        train, test = split(series, SplitSpec(train_weeks=1))
        rebuilt = TrafficSeries(
            np.concatenate([train.values, test.values]), train.start
        )
        assert rebuilt == series

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            SplitSpec(train_weeks=0)
        with pytest.raises(ValueError):
            SplitSpec(week_start="someday")


class TestModelPersistence:
    def test_bundled_guangzhou_matches_transcription(self, guangzhou):
        for comp in ComponentId:
            rate, variance, time_ = GUANGZHOU_TABLE[comp.value]
            assert guangzhou[comp].peak_rate == rate
            assert guangzhou[comp].variance == variance
            assert guangzhou[comp].peak_time == time_

    def test_bundled_milan_loads(self, milan):
        assert milan[ComponentId.EW].peak_rate == 7327

    def test_unknown_bundle(self):
        with pytest.raises(WeekfitError, match="shanghai"):
            bundled_model("shanghai")

    @settings(max_examples=50, deadline=None)
    @given(model=model_st)
    def test_round_trip_exact(self, model, tmp_path_factory):
        path = tmp_path_factory.mktemp("models") / "model.json"
        save_model(model, path)
        assert load_model(path) == model

    def test_missing_component_named(self, tmp_path, guangzhou):
        path = tmp_path / "model.json"
        save_model(guangzhou, path)
        payload = json.loads(path.read_text())
        del payload["esu"]
        path.write_text(json.dumps(payload))
        with pytest.raises(ModelFormatError, match="esu"):
            load_model(path)

    def test_unknown_component_rejected(self, tmp_path, guangzhou):
        path = tmp_path / "model.json"
        save_model(guangzhou, path)
        payload = json.loads(path.read_text())
        payload["xyz"] = payload["mw"]
        path.write_text(json.dumps(payload))
        with pytest.raises(ModelFormatError, match="xyz"):
            load_model(path)

    def test_unknown_field_rejected(self, tmp_path, guangzhou):
        path = tmp_path / "model.json"
        save_model(guangzhou, path)
        payload = json.loads(path.read_text())
        payload["mw"]["skew"] = 1.0
        path.write_text(json.dumps(payload))
        with pytest.raises(ModelFormatError, match="skew"):
            load_model(path)

    def test_non_finite_rejected(self, tmp_path, guangzhou):
        path = tmp_path / "model.json"
        save_model(guangzhou, path)
        path.write_text(path.read_text().replace("4626.0", "NaN"))
        with pytest.raises(ModelFormatError, match="finite"):
            load_model(path)

    def test_invariant_violation_reported(self, tmp_path, guangzhou):
        path = tmp_path / "model.json"
        save_model(guangzhou, path)
        payload = json.loads(path.read_text())
        payload["mw"]["variance"] = -1.0
        path.write_text(json.dumps(payload))
        with pytest.raises(ModelFormatError, match="variance"):
            load_model(path)


class TestSeriesCsv:
    def test_series_csv_format(self, tmp_path):
        series = TrafficSeries(np.array([1.5, 2.0]), 166)
        path = tmp_path / "series.csv"
        write_series_csv(series, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "week,day_k,hour,value"
        assert lines[1] == "0,7,22,1.5"
        assert lines[2] == "0,7,23,2.0"

    def test_timestamp_csv_round_trips_through_ingestion(self, tmp_path):
        rng = np.random.default_rng(3)
        series = TrafficSeries(rng.uniform(0, 100, 200), 0)
        path = tmp_path / "data.csv"
        write_timestamp_csv(series, path)
        rebuilt = aggregate_hourly(load_csv(path))
        assert rebuilt == series

    def test_byte_stable_output(self, tmp_path):
        series = TrafficSeries(np.linspace(0.1, 9.7, 50), 3)
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        write_series_csv(series, first)
        write_series_csv(series, second)
        assert first.read_bytes() == second.read_bytes()
