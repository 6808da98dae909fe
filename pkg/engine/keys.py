"""
KeyRegistry keeps track of which config section owns which key, so that
scenario files and --override arguments can be checked against it.
"""
from engine.errors import ValidationError


class KeyRegistry(object):
    """
    Store the known (section, key) pairs in registration order.
    Used by the config loader to reject unknown keys and by the command line
    to resolve bare override keys such as `R_on` to `power.R_on`.
    """
    def __init__(self):
        self._key_to_sections = {}
        self._ordered = []

    def add(self, section, key):
        """Register a key under a section."""
        sections = self._key_to_sections.setdefault(key, [])
        if section not in sections:
            sections.append(section)
            self._ordered.append((section, key))

    def has_key(self, key, section=None):
        """Check if a key is registered, optionally under a given section."""
        if section is None:
            return key in self._key_to_sections
        return section in self._key_to_sections.get(key, ())

    def get_section(self, key):
        """Get the single section owning a bare key."""
        sections = self._key_to_sections.get(key)
        if not sections:
            raise ValidationError("Unknown config key %s" % repr(key), key=key)
        if len(sections) > 1:
            raise ValidationError("Config key %s is ambiguous between sections %s; use section.key"
                                  % (repr(key), ", ".join(sections)), key=key)
        return sections[0]

    def resolve(self, name):
        """Turn 'key' or 'section.key' into a registered (section, key) pair."""
        if '.' in name:
            section, key = name.split('.', 1)
            if not self.has_key(key, section):
                raise ValidationError("Unknown config key %s" % repr(name), key=name)
            return section, key
        return self.get_section(name), name

    def sections(self):
        """Section names in registration order."""
        seen = []
        for section, _ in self._ordered:
            if section not in seen:
                seen.append(section)
        return seen

    def keys_in(self, section):
        """Keys of one section in registration order."""
        return [key for sec, key in self._ordered if sec == section]

    def __iter__(self):
        return iter(self._ordered)

    def __len__(self):
        return len(self._ordered)
