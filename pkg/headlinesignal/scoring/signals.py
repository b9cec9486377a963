#: the prompt is always sent with temperature 0
TEMPERATURE = 0.0
DEFAULT_MODEL_ID = 'gpt-3.5-turbo'

#: template resource shipped with the package
PROMPT_VERSION = 'v1'
PROMPT_RESOURCE = 'resources/prompt_{}.txt'.format(PROMPT_VERSION)
LEXICON_RESOURCE = 'resources/lexicon.json'

# Remote backend etiquette.
DEFAULT_RETRIES = 5
DEFAULT_BACKOFF = 1.0  # sec, doubles per retry
MAX_BACKOFF = 60.0  # sec
DEFAULT_RATE = 1.0  # requests per sec
DEFAULT_BURST = 1
DEFAULT_IN_FLIGHT = 1
DEFAULT_TIMEOUT = 60.0  # sec

#: environment variable holding the API key, unless configured otherwise
DEFAULT_API_KEY_ENV = 'OPENAI_API_KEY'
