"""The recommendation prompt and its rendering."""
import hashlib
import pkgutil
import re
from functools import lru_cache
from typing import Mapping

from ..exceptions import ParseError
from ..records.base_records import HeadlineRecord, Record
from ..records.fields import EnumField, FloatField, StringField
from ..records.types import Term
from .signals import DEFAULT_MODEL_ID, PROMPT_RESOURCE, TEMPERATURE

PLACEHOLDERS = ('company_name', 'term', 'headline')
_PLACEHOLDER = re.compile(r'_({})_'.format('|'.join(PLACEHOLDERS)))


class PromptRequest(Record):
    company_name = StringField(non_empty=True)
    term = EnumField(data_type=Term)
    headline = StringField(non_empty=True)
    model_id = StringField(non_empty=True)
    temperature = FloatField(choices=(TEMPERATURE,))

    @classmethod
    def for_headline(cls, record: HeadlineRecord, term: Term = Term.SHORT,
                     model_id: str = DEFAULT_MODEL_ID) -> 'PromptRequest':
        return cls(company_name=record.firm_name, term=term,
                   headline=record.headline, model_id=model_id,
                   temperature=TEMPERATURE)


@lru_cache(maxsize=None)
def load_template(resource: str = PROMPT_RESOURCE) -> str:
    return pkgutil.get_data(__package__, resource).decode('utf-8')


def render_template(template: str, values: Mapping[str, str]) -> str:
    """
    Replace every `_name_` placeholder in one pass; placeholder-like text
    inside the substituted values is left alone.
    """
    return _PLACEHOLDER.sub(lambda m: values[m.group(1)], template)


def build_prompt(request: PromptRequest, template: str = None) -> str:
    if not request.company_name or not request.company_name.strip():
        raise ParseError('company name must not be empty',
                         field='company_name')
    if not request.headline or not request.headline.strip():
        raise ParseError('headline must not be empty', field='headline')
    return render_template(
        template if template is not None else load_template(),
        {'company_name': request.company_name.strip(),
         'term': request.term.value,
         'headline': request.headline.strip()})


def prompt_hash(prompt: str) -> str:
    return hashlib.sha256(prompt.encode('utf-8')).hexdigest()
