##############################################################################
# (c) Crown copyright Met Office. All rights reserved.
# For further details please refer to the file COPYRIGHT
# which you should have received as part of this distribution
##############################################################################
"""
Tests for the parallel helpers shared by all experiments.
"""
from unittest import mock

import pytest

from fastnoise.experiments import check_for_errors, run_mp, step
from fastnoise.experiments.ensemble import RealizationFailure


def square(x):
    return x * x


class Test_run_mp(object):

    def test_serial(self):
        assert run_mp(1, range(5), square) == [0, 1, 4, 9, 16]

    def test_parallel_keeps_order(self):
        assert run_mp(3, range(20), square) == [x * x for x in range(20)]

    def test_empty(self):
        assert run_mp(4, [], square) == []


class Test_check_for_errors(object):

    def test_no_errors(self):
        assert check_for_errors([1, 2, 3], RealizationFailure) == []

    def test_some_errors(self):
        failure = RealizationFailure(5, 'NumericalFailure', 'non-finite amplitudes', step=7)
        assert check_for_errors([1, failure, 3], RealizationFailure) == [failure]

    def test_all_errors(self):
        failures = [RealizationFailure(s, 'FitError', 'nope') for s in range(2)]
        with pytest.raises(RuntimeError, match='2 error.s. found during scan'):
            check_for_errors(failures, RealizationFailure, caller_label='scan')


class Test_step(object):

    def test_sends_time(self):

        @step
        def my_step(x):
            return x + 1

        with mock.patch('fastnoise.experiments.send_metric') as mock_send:
            assert my_step(1) == 2

        group, name, taken = mock_send.call_args[0]
        assert (group, name) == ('steps', 'my_step')
        assert taken >= 0
