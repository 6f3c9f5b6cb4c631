"""
DenseSub - Internationalization
===============================

Message catalogs for the command-line surface.
"""

import json

from ..constants import AVAILABLE_LANGUAGES, DEFAULT_LANGUAGE
from ..core.file_utils import get_resource_path


class LanguageManager:
    """Manages the active language and its translations."""

    def __init__(self):
        self.current_language = DEFAULT_LANGUAGE
        self.translations = {}
        for lang in AVAILABLE_LANGUAGES:
            self.load_language(lang)

    def load_language(self, language_code):
        """Load one catalog; a missing or broken file leaves English in charge."""
        try:
            with open(get_resource_path(f"i18n/{language_code}.json"), "r", encoding="utf-8") as f:
                self.translations[language_code] = json.load(f)
        except (OSError, ValueError):
            self.translations.setdefault(language_code, {})

    def set_language(self, language_code):
        if language_code in AVAILABLE_LANGUAGES:
            self.current_language = language_code

    def get_text(self, key, **kwargs):
        """Translated text for a dotted key; falls back to English, then to the key."""
        text = self._get_nested_value(self.translations.get(self.current_language, {}), key)
        if text is None and self.current_language != DEFAULT_LANGUAGE:
            text = self._get_nested_value(self.translations.get(DEFAULT_LANGUAGE, {}), key)
        if text is None:
            text = key
        try:
            return text.format(**kwargs)
        except (KeyError, IndexError, ValueError):
            return text

    @staticmethod
    def _get_nested_value(data, key):
        value = data
        for part in key.split("."):
            if isinstance(value, dict) and part in value:
                value = value[part]
            else:
                return None
        return value if isinstance(value, str) else None


# Global language manager instance
language_manager = LanguageManager()


def _(key, **kwargs):
    """Shorthand function for getting translated text."""
    return language_manager.get_text(key, **kwargs)
