import requests
import json
import os
from dotenv import load_dotenv
load_dotenv()

OPEN_TOKEN = os.getenv('OPEN_TOKEN')

API_HOST = 'https://api.switch-bot.com'
DEBIVELIST_URL = f"{API_HOST}/v1.0/devices"

HEADERS = {
    'Authorization': OPEN_TOKEN,
    'Content-Type': 'application/json; charset=utf8'
}


def get_device_list() -> json:
    response = requests.get(DEBIVELIST_URL, headers=HEADERS)
    response.raise_for_status()
    return response.json()
