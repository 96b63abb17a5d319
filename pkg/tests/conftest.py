import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

SOURCE = "Tropical Weather Outlook"
ES_HUMAN = "Perspective sobre las Condiciones del Tiempo en el Trópico"
ES_MACHINE = "Perspectiva sobre las Condiciones del Tiempo en el Trópico"
ES_BACK = "Perspective on Weather Conditions in the Tropics"
FR_HUMAN = "Aperçu des conditions météorologiques tropicales"
FR_MACHINE = "Prévisions météorologiques tropicales"
FR_BACK = "Tropical weather forecast"


@pytest.fixture
def worked():
    return {
        "source": SOURCE,
        "es": {"human": ES_HUMAN, "machine": ES_MACHINE, "back": ES_BACK},
        "fr": {"human": FR_HUMAN, "machine": FR_MACHINE, "back": FR_BACK},
    }
