"""Known people and face-tag identification.

Face tags are opaque strings produced elsewhere (stand-ins for the camera's
recognition output); identification is exact-match only.
"""

from __future__ import annotations

from dataclasses import dataclass


class RegistryError(Exception):
    pass


class DuplicateFaceTag(RegistryError):
    pass


class PersonNotFound(RegistryError):
    pass


class InvalidPerson(RegistryError):
    pass


@dataclass(frozen=True)
class Person:
    id: int
    name: str
    face_tag: str
    photo_ref: str
    telephone: str
    mobile: str


class PersonRegistry:
    def __init__(self) -> None:
        self._people: dict[int, Person] = {}
        self._by_tag: dict[str, int] = {}
        self._next_id = 0

    @classmethod
    def restore(cls, people: list[Person], next_id: int) -> "PersonRegistry":
        registry = cls()
        for person in people:
            registry._people[person.id] = person
            registry._by_tag[person.face_tag] = person.id
        registry._next_id = next_id
        return registry

    def add_person(
        self, name: str, face_tag: str, photo_ref: str, telephone: str, mobile: str
    ) -> int:
        if not name:
            raise InvalidPerson("name must not be empty")
        if face_tag in self._by_tag:
            raise DuplicateFaceTag(f"face tag {face_tag!r} already registered")
        person = Person(self._next_id, name, face_tag, photo_ref, telephone, mobile)
        self._people[person.id] = person
        self._by_tag[face_tag] = person.id
        self._next_id += 1
        return person.id

    def identify(self, face_tag: str) -> Person | None:
        pid = self._by_tag.get(face_tag)
        return self._people[pid] if pid is not None else None

    def has_person(self, person_id: int) -> bool:
        return person_id in self._people

    def has_tag(self, face_tag: str) -> bool:
        return face_tag in self._by_tag

    def next_person_id(self) -> int:
        return self._next_id

    def list_people(self) -> list[Person]:
        return [self._people[i] for i in sorted(self._people)]

    def get(self, person_id: int) -> Person:
        try:
            return self._people[person_id]
        except KeyError:
            raise PersonNotFound(f"no person {person_id}") from None

    def remove_person(self, person_id: int) -> Person:
        person = self.get(person_id)
        del self._people[person_id]
        del self._by_tag[person.face_tag]
        return person
